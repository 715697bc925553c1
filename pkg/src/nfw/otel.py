"""OpenTelemetry integration for the verification driver."""

import logging
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from nfw.reports import IdentityResult

logger = logging.getLogger(__name__)

# Try to import OpenTelemetry, but don't fail if not available
try:
    from opentelemetry import metrics, trace
    from opentelemetry.trace import Status, StatusCode

    OTEL_AVAILABLE = True
except ImportError:
    OTEL_AVAILABLE = False
    logger.debug("OpenTelemetry not available, metrics and tracing disabled")


class OTelHooks:
    """
    OpenTelemetry hooks for identity verification.

    Records a counter per identity outcome, a duration histogram and span
    events. If OpenTelemetry is not installed, all methods are no-ops.

    Usage:
        hooks = OTelHooks(service_name="nfw")

        verifier = Verifier(
            on_identity=hooks.on_identity,
            on_error=hooks.on_error,
        )
    """

    def __init__(
        self,
        service_name: str = "nfw",
        meter_name: str | None = None,
        tracer_name: str | None = None,
        include_problem_attrs: bool = True,
    ):
        """
        Initialize OpenTelemetry hooks.

        Args:
            service_name: Service name for metrics and traces
            meter_name: Custom meter name (defaults to service_name)
            tracer_name: Custom tracer name (defaults to service_name)
            include_problem_attrs: Include the problem name in telemetry
        """
        self.service_name = service_name
        self.meter_name = meter_name or service_name
        self.tracer_name = tracer_name or service_name
        self.include_problem_attrs = include_problem_attrs

        self._meter: Any = None
        self._tracer: Any = None

        if OTEL_AVAILABLE:
            self._meter = metrics.get_meter(self.meter_name)

            self._identities_total = self._meter.create_counter(
                name="nfw_identities_total",
                description="Identities verified, by status",
                unit="1",
            )

            self._identity_duration = self._meter.create_histogram(
                name="nfw_identity_duration_ms",
                description="Time to compute both sides of an identity",
                unit="ms",
            )

            self._errors_total = self._meter.create_counter(
                name="nfw_identity_errors_total",
                description="Identities that could not be computed",
                unit="1",
            )

            self._tracer = trace.get_tracer(self.tracer_name)

    def on_identity(self, problem_name: str, result: "IdentityResult", duration_ms: float) -> None:
        """Hook called after each identity."""
        if not OTEL_AVAILABLE:
            return

        attrs = self._build_attributes(problem_name, result.name)
        attrs["status"] = result.status
        self._identities_total.add(1, attrs)
        self._identity_duration.record(duration_ms, attrs)

        current_span = trace.get_current_span()
        if current_span and current_span.is_recording():
            event_attrs: dict[str, Any] = {
                "nfw.identity": result.name,
                "nfw.status": result.status,
                "nfw.counted": result.counted,
                "nfw.duration_ms": duration_ms,
            }
            if result.gate is not None:
                event_attrs["nfw.gate"] = result.gate
                event_attrs["nfw.gate_verdict"] = result.gate_verdict or ""
            current_span.add_event(name="identity_verified", attributes=event_attrs)

    def on_error(self, problem_name: str, identity: str, error: Exception, duration_ms: float) -> None:
        """Hook called when an identity fails to compute."""
        if not OTEL_AVAILABLE:
            return

        attrs = self._build_attributes(problem_name, identity)
        attrs["error_type"] = type(error).__name__
        self._errors_total.add(1, attrs)
        self._identity_duration.record(duration_ms, attrs)

        current_span = trace.get_current_span()
        if current_span and current_span.is_recording():
            current_span.record_exception(error)
            current_span.set_status(Status(StatusCode.ERROR, str(error)))
            current_span.add_event(
                name="identity_error",
                attributes={
                    "error.type": type(error).__name__,
                    "error.message": str(error),
                    "nfw.identity": identity,
                    "nfw.duration_ms": duration_ms,
                },
            )

    def _build_attributes(self, problem_name: str, identity: str) -> dict[str, Any]:
        attrs = {"service": self.service_name, "identity": identity}
        if self.include_problem_attrs:
            attrs["problem"] = problem_name
        return attrs


def create_otel_hooks(service_name: str = "nfw", **kwargs: Any) -> tuple[Any, Any]:
    """
    Create OpenTelemetry hooks for the verifier.

    Returns a tuple of (on_identity, on_error) hooks; no-op functions when
    OpenTelemetry is not available.
    """
    if OTEL_AVAILABLE:
        hooks = OTelHooks(service_name=service_name, **kwargs)
        return hooks.on_identity, hooks.on_error

    def noop_identity(problem_name: str, result: Any, duration_ms: float) -> None:
        pass

    def noop_error(problem_name: str, identity: str, error: Exception, duration_ms: float) -> None:
        pass

    return noop_identity, noop_error
