"""End-to-end checks across modules: model construction through moments."""

import pytest

from qwalk.config import Config, get_config
from qwalk.gamma import faithfulness_probe, verify_model_rep, walk_moment
from qwalk.groups import AbelianGroup
from qwalk.hadamard import generic_q
from qwalk.models import check_projective, deform, dual, fourier_model
from qwalk.moments import duality_check, haar_moment, phase_sum_moment, truncated_moment
from qwalk.verify import verify_suite

Z2 = AbelianGroup.cyclic(2)
Z3 = AbelianGroup.cyclic(3)


@pytest.fixture
def deformed_z2z3():
    Q = generic_q(Z2, Z3, seed=11)
    return deform(fourier_model(Z2), fourier_model(Z3), Q, "right"), Q


class TestPipeline:
    """Q -> deformed model -> moments, compared across oracles."""

    def test_model_is_projective(self, deformed_z2z3):
        """Test that the deformed model and its dual are magic."""
        W, _ = deformed_z2z3
        assert check_projective(W).passed

    def test_spectral_matches_enumeration(self, deformed_z2z3):
        """Test that the Haar moments match the exact walk moments for p <= 2."""
        W, _ = deformed_z2z3
        for p in (1, 2):
            exact = float(walk_moment(Z2, Z3, p).exact)
            assert haar_moment(W, p, "spectral").value == pytest.approx(exact, abs=1e-6)

    def test_duality(self, deformed_z2z3):
        """Test gamma_p^r(W) = gamma_r^p(W') on a small grid."""
        W, _ = deformed_z2z3
        assert duality_check(W, p_max=2, r_max=2).passed

    def test_phase_sum_formula(self):
        """Test the sum formula for truncated moments against the transfer matrix."""
        U = V = fourier_model(Z2)
        Q = generic_q(Z2, Z2, seed=4)
        W = deform(U, V, Q, "right")
        for p in (1, 2):
            for r in (1, 2):
                assert phase_sum_moment(U, dual(V), Q, p, r) == pytest.approx(truncated_moment(W, p, r), abs=1e-9)

    def test_representation_and_probe(self, deformed_z2z3):
        """Test the model action and the faithfulness probe on the same Q."""
        W, Q = deformed_z2z3
        assert verify_model_rep(W, Q).passed
        assert faithfulness_probe(Q, n_words=20, seed=2).passed


class TestQuickSuite:
    """Cheap slice of the verification suite."""

    def test_cheap_checks_pass(self):
        """Test the exact-moment, Haar and free-probability checks."""
        report = verify_suite("quick", ["WALK-001", "HAAR-001", "FREE-001"])
        assert report.passed, report.failures
        assert {r.id for r in report.results} == {"WALK-001", "HAAR-001", "FREE-001"}


class TestConfig:
    """Environment-driven configuration."""

    def test_defaults(self):
        """Test the default tolerance ladder."""
        policy = Config().current_policy
        assert policy.tolerances.magic == 1e-9
        assert policy.tolerances.spectral == 1e-6
        assert policy.caps.walk_enumeration == 100_000_000

    def test_env_override(self, monkeypatch):
        """Test QWALK_* overrides."""
        monkeypatch.setenv("QWALK_THREADS", "3")
        monkeypatch.setenv("QWALK_CAP_NC_SIZE", "8")
        config = Config()
        assert config.THREADS == 3
        assert config.current_policy.sampling.threads == 3
        assert config.current_policy.caps.nc_size == 8

    def test_cached_instance(self):
        """Test that get_config returns one instance."""
        assert get_config() is get_config()
