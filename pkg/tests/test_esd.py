import numpy as np
import pytest

from esdlab import esd
from esdlab.dynamics import (
    DecayRates,
    MixedFamilyParams,
    StateFamily,
    negativity_phi1_closed,
)
from esdlab.esd import (
    ASYMPTOTIC,
    INITIALLY_SEPARABLE,
    SUDDEN_DEATH,
    classify,
    death_time,
    scan_beta_boundary,
    scan_c_boundary,
)

RATES_EQUAL = DecayRates(1.0, 1.0, 1.0)


def phi1(beta):
    return StateFamily.pure("phi1", np.sqrt(1.0 - beta**2), beta)


class TestDeathTime:
    def test_phi1_death_at_ln4(self):
        t_star = death_time(
            lambda t: negativity_phi1_closed(0.8, RATES_EQUAL, t), 10.0, tol=0.0
        )
        assert t_star == pytest.approx(np.log(4.0), abs=1e-6)

    def test_bisection_brackets_crossing(self):
        neg = lambda t: negativity_phi1_closed(0.85, RATES_EQUAL, t)
        t_star = death_time(neg, 10.0, tol=0.0)
        assert neg(t_star - 1e-6) > 0.0
        assert neg(t_star + 1e-6) <= 0.0

    def test_no_crossing_below_threshold(self):
        beta = np.sqrt(0.5)
        if beta * beta > 0.5:
            beta = np.nextafter(beta, 0.0)
        t_star = death_time(
            lambda t: negativity_phi1_closed(beta, RATES_EQUAL, t), 50.0, tol=0.0
        )
        assert t_star is None

    def test_phi2_never_dies(self):
        from esdlab.dynamics import negativity_phi2_closed

        for beta in (0.3, 0.7, 0.95):
            alpha = np.sqrt(1 - beta**2)
            t_star = death_time(
                lambda t: negativity_phi2_closed(alpha, beta, RATES_EQUAL, t),
                50.0,
                tol=0.0,
            )
            assert t_star is None

    def test_rejects_initially_dead(self):
        with pytest.raises(ValueError):
            death_time(lambda t: 0.0, 10.0, tol=0.0)

    def test_revival_reported(self):
        bump = lambda t: max(np.cos(t), 0.0) + max(np.cos(t - 6.0), 0.0)
        with pytest.raises(esd.RevivalError):
            death_time(bump, 10.0, tol=1e-9)


class TestClassify:
    @pytest.mark.parametrize("beta", [0.8, 0.9, 0.95])
    def test_phi1_sudden_death(self, beta):
        report = classify(phi1(beta), RATES_EQUAL)
        assert report.kind == SUDDEN_DEATH
        assert report.death_time > 0

    @pytest.mark.parametrize("beta", [0.3, 0.5])
    def test_phi1_asymptotic(self, beta):
        report = classify(phi1(beta), RATES_EQUAL)
        assert report.kind == ASYMPTOTIC
        assert report.residual_negativity > 0
        # below threshold the surviving tail decays at max(gamma, gamma1)
        assert report.tail_slope == pytest.approx(-1.0, rel=1e-3)

    def test_phi1_boundary_beta(self):
        beta = np.sqrt(0.5)
        if beta * beta > 0.5:
            beta = np.nextafter(beta, 0.0)
        assert classify(phi1(beta), RATES_EQUAL).kind == ASYMPTOTIC

    def test_phi2_asymptotic(self):
        report = classify(StateFamily.pure("phi2plus", 0.6, 0.8), RATES_EQUAL)
        assert report.kind == ASYMPTOTIC

    def test_phi2_prime_asymptotic(self):
        rates = DecayRates(0.1, 0.1, 0.1)
        beta = 0.9
        report = classify(StateFamily.pure("phi2prime", np.sqrt(1 - beta**2), beta), rates)
        assert report.kind == ASYMPTOTIC

    def test_initially_separable(self):
        report = classify(phi1(1.0), RATES_EQUAL)
        assert report.kind == INITIALLY_SEPARABLE

    def test_mixed_sudden_death(self):
        family = StateFamily.from_mixed(MixedFamilyParams.from_bc(0.02, 0.15))
        report = classify(family, RATES_EQUAL, 10.0)
        assert report.kind == SUDDEN_DEATH

    def test_mixed_asymptotic(self):
        family = StateFamily.from_mixed(MixedFamilyParams.from_bc(0.02, 0.5))
        report = classify(family, RATES_EQUAL, 6.0)
        assert report.kind == ASYMPTOTIC

    def test_interference_delays_mixed_death(self):
        for b, c in ((0.02, 0.15), (0.06, 0.25)):
            family = StateFamily.from_mixed(MixedFamilyParams.from_bc(b, c))
            no_interference = classify(family, DecayRates(1.0, 1.0, 1.0), 10.0)
            max_interference = classify(family, DecayRates(1.0, 0.0, 1.0), 10.0)
            assert max_interference.death_time > no_interference.death_time

    def test_detection_paths_agree(self):
        # closed-form and numeric classification agree in kind and death time
        for beta in (0.5, 0.8, 0.9):
            closed = classify(phi1(beta), RATES_EQUAL, 8.0, method="closed")
            numeric = classify(phi1(beta), RATES_EQUAL, 8.0, method="numeric")
            assert closed.kind == numeric.kind
            if closed.kind == SUDDEN_DEATH:
                assert closed.death_time == pytest.approx(
                    numeric.death_time, abs=1e-4
                )
        for beta in (0.5, 0.9):
            family = StateFamily.pure("phi2plus", np.sqrt(1 - beta**2), beta)
            closed = classify(family, RATES_EQUAL, 8.0, method="closed")
            numeric = classify(family, RATES_EQUAL, 8.0, method="numeric")
            assert closed.kind == numeric.kind == ASYMPTOTIC

    def test_closed_method_unavailable(self):
        with pytest.raises(ValueError):
            classify(StateFamily.pure("phi3plus", 0.6, 0.8), RATES_EQUAL, method="closed")


class TestScanBeta:
    def test_threshold_near_inverse_sqrt2(self):
        scan = scan_beta_boundary(RATES_EQUAL, np.linspace(0.5, 0.99, 12))
        assert scan.threshold == pytest.approx(np.sqrt(0.5), abs=1e-3)
        kinds = [r.kind for r in scan.reports]
        assert kinds == sorted(kinds, key=[ASYMPTOTIC, SUDDEN_DEATH].index)

    def test_threshold_rate_independent(self):
        scan = scan_beta_boundary(DecayRates(1.0, 2.0, 1.0), np.linspace(0.5, 0.99, 12))
        assert scan.threshold == pytest.approx(np.sqrt(0.5), abs=1e-3)

    def test_grid_below_threshold(self):
        scan = scan_beta_boundary(RATES_EQUAL, np.linspace(0.1, 0.5, 6))
        assert scan.threshold is None
        assert all(r.kind == ASYMPTOTIC for r in scan.reports)

    def test_rejects_bad_grid(self):
        with pytest.raises(ValueError):
            scan_beta_boundary(RATES_EQUAL, np.array([0.5, 1.2]))


class TestScanC:
    def test_kind_ordering(self):
        scan = scan_c_boundary(0.02, RATES_EQUAL, np.linspace(0.02, 0.6, 10))
        kinds = [r.kind for r in scan.reports]
        order = [INITIALLY_SEPARABLE, SUDDEN_DEATH, ASYMPTOTIC]
        assert kinds == sorted(kinds, key=order.index)
        assert scan.threshold == pytest.approx(0.302, abs=5e-3)

    def test_rejects_invalid_c(self):
        with pytest.raises(ValueError, match="0.99"):
            scan_c_boundary(0.02, RATES_EQUAL, np.array([0.1, 0.99]))

    def test_all_sudden_death_grid(self):
        scan = scan_c_boundary(0.02, RATES_EQUAL, np.linspace(0.1, 0.25, 4))
        assert scan.threshold == pytest.approx(0.25)
        assert all(r.kind == SUDDEN_DEATH for r in scan.reports)
