"""Tests for the OpenTelemetry hooks."""

from nfw.otel import OTEL_AVAILABLE, OTelHooks, create_otel_hooks
from nfw.reports import IdentityResult


class TestOTelHooks:
    """Test the hooks are safe with or without OpenTelemetry."""

    def test_create_returns_callables(self):
        """Test both hooks are callable."""
        on_identity, on_error = create_otel_hooks(service_name="nfw-test")
        assert callable(on_identity)
        assert callable(on_error)

    def test_hooks_accept_results(self):
        """Test the hooks take verifier arguments without raising."""
        on_identity, on_error = create_otel_hooks()
        result = IdentityResult(name="thm1.1", status="equal", gate="thm1.1", gate_verdict="PASS")
        on_identity("cusp", result, 1.5)
        on_error("cusp", "thm2.5", ValueError("boom"), 0.2)

    def test_attributes(self):
        """Test the problem attribute can be dropped."""
        hooks = OTelHooks(service_name="nfw", include_problem_attrs=False)
        assert hooks._build_attributes("cusp", "thm1.1") == {"service": "nfw", "identity": "thm1.1"}
        assert OTelHooks()._build_attributes("cusp", "thm1.1")["problem"] == "cusp"

    def test_availability_flag(self):
        """Test the flag is a bool."""
        assert isinstance(OTEL_AVAILABLE, bool)
