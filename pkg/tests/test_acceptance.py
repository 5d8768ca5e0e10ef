"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the per-criterion
lines; every tolerance is pinned in the assertion it guards.
"""

import numpy as np
import pytest

from esdlab import dynamics, esd, states
from esdlab.cli import main
from esdlab.dynamics import (
    DecayRates,
    MixedFamilyParams,
    StateFamily,
    evolve_numeric,
    negativity_phi1_closed,
    negativity_phi2_closed,
)

from conftest import haar_unitary, random_density_matrix, random_pure_state

RATES_EQUAL = DecayRates(1.0, 1.0, 1.0)


def boundary_beta():
    beta = np.sqrt(0.5)
    return np.nextafter(beta, 0.0) if beta * beta > 0.5 else beta


def test_criterion_01_pure_state_spectrum_oracle():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        psi = random_pure_state(rng)
        pt = states.partial_transpose(states.pure_to_density(psi), "qutrit")
        solved = states.hermitian_eigenvalues(pt)
        closed = states.pure_pt_spectrum(psi)
        worst = max(worst, float(np.max(np.abs(solved - closed))))
    assert worst < 1e-10
    print(f"PASS criterion 1: PT spectrum closed form, max err {worst:.2e} < 1e-10")


def test_criterion_02_negativity_identities():
    rng = np.random.default_rng(102)
    worst_t0 = 0.0
    for _ in range(100):
        beta = rng.uniform(0.01, 0.99)
        alpha = np.sqrt(1.0 - beta**2)
        n0 = negativity_phi1_closed(beta, RATES_EQUAL, 0.0)
        worst_t0 = max(worst_t0, abs(n0 - 2.0 * alpha * beta))
    assert worst_t0 < 1e-12

    worst_f = 0.0
    for _ in range(1000):
        psi = random_pure_state(rng)
        n_eig = states.negativity(states.pure_to_density(psi))
        n_inv = 2.0 * np.sqrt(states.negativity_invariant(psi))
        worst_f = max(worst_f, abs(n_eig - n_inv))
    assert worst_f < 1e-10
    print(
        f"PASS criterion 2: N(0)=2ab err {worst_t0:.2e} < 1e-12; "
        f"N=2sqrt(f) err {worst_f:.2e} < 1e-10"
    )


def test_criterion_03_maximal_decay_law():
    amp = np.sqrt(0.5)
    rho0 = StateFamily.pure("phi1", amp, amp).initial_density()
    traj = evolve_numeric(rho0, RATES_EQUAL, 5.0, dt=1e-3, stride=10)
    worst = float(np.max(np.abs(traj.negativities - np.exp(-2.0 * traj.times))))
    assert worst < 1e-6
    print(f"PASS criterion 3: numeric N vs exp(-2t) on [0,5], max err {worst:.2e} < 1e-6")


def test_criterion_04_phi1_dichotomy():
    for beta in (0.8, 0.9, 0.95):
        family = StateFamily.pure("phi1", np.sqrt(1 - beta**2), beta)
        assert esd.classify(family, RATES_EQUAL).kind == esd.SUDDEN_DEATH
    for beta in (0.3, 0.5, boundary_beta()):
        family = StateFamily.pure("phi1", np.sqrt(1 - beta**2), beta)
        assert esd.classify(family, RATES_EQUAL).kind == esd.ASYMPTOTIC
    report = esd.classify(StateFamily.pure("phi1", 0.6, 0.8), RATES_EQUAL)
    err = abs(report.death_time - np.log(4.0))
    assert err < 1e-6
    print(
        "PASS criterion 4: dichotomy over six beta values; "
        f"death time vs ln4 err {err:.2e} < 1e-6"
    )


def test_criterion_05_phi2_no_esd():
    rng = np.random.default_rng(105)
    ts = np.linspace(0.0, 50.0, 512)
    floor = np.inf
    for _ in range(20):
        beta = np.sqrt(rng.uniform(0.1, 0.9))
        alpha = np.sqrt(1.0 - beta**2)
        rates = DecayRates(*rng.uniform(0.05, 0.15, 3))
        values = [negativity_phi2_closed(alpha, beta, rates, float(t)) for t in ts]
        floor = min(floor, min(values))
        assert min(values) > 1e-9
        family = StateFamily.pure("phi2plus", alpha, beta)
        assert esd.classify(family, rates, 50.0).kind == esd.ASYMPTOTIC

    # the locally equivalent variant evolved numerically follows the same
    # negativity trajectory (equal qutrit rates)
    worst = 0.0
    for beta in (0.6, 0.9):
        alpha = np.sqrt(1.0 - beta**2)
        rates = DecayRates(0.12, 0.1, 0.1)
        prime = StateFamily.pure("phi2prime", alpha, beta)
        traj = evolve_numeric(prime.initial_density(), rates, 10.0, dt=1e-3, stride=100)
        closed = np.array(
            [negativity_phi2_closed(alpha, beta, rates, float(t)) for t in traj.times]
        )
        worst = max(worst, float(np.max(np.abs(traj.negativities - closed))))
    assert worst < 1e-6
    print(
        f"PASS criterion 5: closed-form floor {floor:.2e} > 1e-9 over [0,50]; "
        f"variant trajectory err {worst:.2e} < 1e-6"
    )


def test_criterion_06_mixed_family_thresholds():
    targets = (
        (0.02, 1.0, 0.302),
        (0.02, 0.0, 0.2775),
        (0.06, 1.0, 0.5493),
        (0.06, 0.0, 0.46295),
    )
    found = {}
    for b, k, target in targets:
        rates = DecayRates(1.0, k, 1.0)
        grid = np.linspace(0.02, min(0.7, 1.0 - 3.0 * b - 1e-9), 12)
        scan = esd.scan_c_boundary(b, rates, grid)
        assert scan.threshold is not None
        assert scan.threshold == pytest.approx(target, abs=5e-3)
        found[(b, k)] = scan.threshold
    # interference narrows the sudden-death window
    for b in (0.02, 0.06):
        assert found[(b, 0.0)] < found[(b, 1.0)]
    summary = "; ".join(
        f"b={b:g},k={k:g}: {found[(b, k)]:.4f} (target {tg})" for b, k, tg in targets
    )
    print(f"PASS criterion 6: thresholds within 5e-3 -- {summary}")


def test_criterion_07_interference_delays_death():
    pairs = []
    for b, c in ((0.02, 0.15), (0.06, 0.25)):
        family = StateFamily.from_mixed(MixedFamilyParams.from_bc(b, c))
        t_k1 = esd.classify(family, DecayRates(1.0, 1.0, 1.0), 10.0).death_time
        t_k0 = esd.classify(family, DecayRates(1.0, 0.0, 1.0), 10.0).death_time
        assert t_k0 > t_k1
        pairs.append((b, c, t_k1, t_k0))
    summary = "; ".join(
        f"b={b:g},c={c:g}: {t0:.4f} > {t1:.4f}" for b, c, t1, t0 in pairs
    )
    print(f"PASS criterion 7: k=0 death later than k=1 -- {summary}")


def test_criterion_08_asymptotic_state():
    rng = np.random.default_rng(108)
    ground = dynamics.asymptotic_state()
    worst = 0.0
    for _ in range(20):
        rho0 = random_density_matrix(rng)
        rates = DecayRates(*rng.uniform(0.5, 2.0, 3))
        t_end = 50.0 / min(rates.gamma, rates.gamma1, rates.gamma2)
        traj = evolve_numeric(rho0, rates, t_end, dt=1e-3, stride=10**9)
        dist = 0.5 * float(
            np.sum(np.abs(states.hermitian_eigenvalues(traj.states[-1] - ground)))
        )
        worst = max(worst, dist)
    assert worst < 1e-6
    print(f"PASS criterion 8: trace distance to ground at t=50/min, max {worst:.2e} < 1e-6")


def test_criterion_09_structural_properties():
    rng = np.random.default_rng(109)

    drift = defect = dip = 0.0
    tested_states = []
    for _ in range(3):
        traj = evolve_numeric(
            random_density_matrix(rng),
            DecayRates(*rng.uniform(0.5, 1.5, 3)),
            4.0,
            dt=1e-3,
            stride=100,
        )
        for rho in traj.states:
            drift = max(drift, abs(float(np.trace(rho).real) - 1.0))
            defect = max(defect, float(np.max(np.abs(rho - rho.conj().T))))
            dip = max(dip, -float(states.hermitian_eigenvalues(rho)[0]))
            tested_states.append(rho)
    assert drift < 1e-9
    assert defect < 1e-10
    assert dip < 1e-8

    invariance = 0.0
    for _ in range(200):
        rho = random_density_matrix(rng)
        u = np.kron(haar_unitary(rng, 2), haar_unitary(rng, 3))
        rotated = u @ rho @ u.conj().T
        rotated = 0.5 * (rotated + rotated.conj().T)
        invariance = max(
            invariance, abs(states.negativity(rho) - states.negativity(rotated))
        )
    assert invariance < 1e-10

    for _ in range(200):
        pure = states.pure_to_density(random_pure_state(rng))
        assert states.negative_pt_eigenvalue_count(pure) <= 1
        assert states.negative_pt_eigenvalue_count(random_density_matrix(rng)) <= 2
    for rho in tested_states:
        sym = 0.5 * (rho + rho.conj().T)
        assert states.negative_pt_eigenvalue_count(sym) <= 2

    print(
        "PASS criterion 9: structure -- "
        f"trace drift {drift:.2e} < 1e-9, hermiticity {defect:.2e} < 1e-10, "
        f"min-eig dip {dip:.2e} < 1e-8, LU invariance {invariance:.2e} < 1e-10, "
        "PT negative counts within 1 (pure) / 2 (mixed)"
    )


def test_criterion_10_figure_determinism(tmp_path):
    for fig_id in (1, 2, 3, 4):
        run_a = tmp_path / f"a{fig_id}"
        run_b = tmp_path / f"b{fig_id}"
        assert main(["figure", "--id", str(fig_id), "--out", str(run_a)]) == 0
        assert main(["figure", "--id", str(fig_id), "--out", str(run_b)]) == 0
        names_a = sorted(p.name for p in run_a.iterdir())
        names_b = sorted(p.name for p in run_b.iterdir())
        assert names_a == names_b
        for name in names_a:
            assert (run_a / name).read_bytes() == (run_b / name).read_bytes(), name
    print("PASS criterion 10: byte-identical figure outputs for ids 1-4 (CSV and PNG)")
