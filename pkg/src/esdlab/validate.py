"""Cross-module validation checks behind the ``validate`` subcommand.

Each check computes a maximum observed error against a pinned tolerance;
the CLI prints one line per check and exits nonzero if any fails.  All
randomness is seeded, so repeated runs are identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics, esd, states
from .dynamics import DecayRates, MixedFamilyParams, StateFamily

SEED = 20240811


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tol


def _random_pure(rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(states.DIM) + 1j * rng.standard_normal(states.DIM)
    return psi / np.linalg.norm(psi)


def _random_density(rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((states.DIM, states.DIM)) + 1j * rng.standard_normal(
        (states.DIM, states.DIM)
    )
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def check_pt_spectrum(dt: float, n_states: int = 200) -> list[CheckResult]:
    """Closed-form pure-state PT spectrum vs the eigensolver."""
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(n_states):
        psi = _random_pure(rng)
        pt = states.partial_transpose(states.pure_to_density(psi), "qutrit")
        diff = states.pure_pt_spectrum(psi) - states.hermitian_eigenvalues(pt)
        worst = max(worst, float(np.max(np.abs(diff))))
    return [CheckResult("pt_spectrum_closed_form", worst, 1e-10)]


def check_negativity_invariant(dt: float, n_states: int = 200) -> list[CheckResult]:
    """negativity == 2 sqrt(invariant) on random pure states."""
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(n_states):
        psi = _random_pure(rng)
        n_eig = states.negativity(states.pure_to_density(psi))
        n_inv = 2.0 * np.sqrt(states.negativity_invariant(psi))
        worst = max(worst, abs(n_eig - n_inv))
    return [CheckResult("negativity_invariant", worst, 1e-10)]


def check_local_unitary_invariance(dt: float, n_pairs: int = 50) -> list[CheckResult]:
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(n_pairs):
        rho = _random_density(rng)
        u = np.kron(_haar_unitary(rng, 2), _haar_unitary(rng, 3))
        rotated = u @ rho @ u.conj().T
        rotated = 0.5 * (rotated + rotated.conj().T)
        worst = max(worst, abs(states.negativity(rho) - states.negativity(rotated)))
    return [CheckResult("local_unitary_invariance", worst, 1e-10)]


def check_analytic_numeric_agreement(dt: float) -> list[CheckResult]:
    """Exact family solutions vs the RK4 integrator, entrywise."""
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(6):
        beta = rng.uniform(0.2, 0.95)
        alpha = np.sqrt(1.0 - beta**2)
        rates = DecayRates(*rng.uniform(0.3, 1.5, 3))
        t = rng.uniform(0.3, 2.5)
        for family, exact in (
            (
                StateFamily.pure("phi1", alpha, beta),
                dynamics.evolve_phi1_analytic(alpha, beta, rates, t),
            ),
            (
                StateFamily.pure("phi2plus", alpha, beta),
                dynamics.evolve_phi2_analytic(alpha, beta, rates, t),
            ),
        ):
            traj = dynamics.evolve_numeric(
                family.initial_density(), rates, t, dt=dt, stride=10**9
            )
            worst = max(worst, float(np.max(np.abs(traj.states[-1] - exact))))
        params = MixedFamilyParams.from_bc(rng.uniform(0.01, 0.1), rng.uniform(0.05, 0.4))
        traj = dynamics.evolve_numeric(
            dynamics.mixed_family_density(params), rates, t, dt=dt, stride=10**9
        )
        exact = dynamics.evolve_mixed_analytic(params, rates, t)
        worst = max(worst, float(np.max(np.abs(traj.states[-1] - exact))))
    return [CheckResult("analytic_numeric_agreement", worst, 1e-7)]


def check_trajectory_structure(dt: float) -> list[CheckResult]:
    """Trace, Hermiticity and positivity preservation along a trajectory."""
    rng = np.random.default_rng(SEED + 4)
    rho0 = _random_density(rng)
    rates = DecayRates(1.0, 0.6, 1.3)
    traj = dynamics.evolve_numeric(
        rho0, rates, 4.0, dt=dt, stride=40, trace_drift_tol=np.inf, hermiticity_tol=np.inf
    )
    drift = hermiticity = dip = 0.0
    for rho in traj.states:
        drift = max(drift, abs(float(np.trace(rho).real) - 1.0))
        hermiticity = max(hermiticity, float(np.max(np.abs(rho - rho.conj().T))))
        dip = max(dip, -float(states.hermitian_eigenvalues(rho)[0]))
    return [
        CheckResult("trajectory_trace_drift", drift, 1e-9),
        CheckResult("trajectory_hermiticity", hermiticity, 1e-10),
        CheckResult("trajectory_positivity", dip, 1e-8),
    ]


def check_maximal_decay_law(dt: float) -> list[CheckResult]:
    """Numeric negativity of the maximally entangled phi1 state vs exp(-2t)."""
    amp = np.sqrt(0.5)
    rates = DecayRates(1.0, 1.0, 1.0)
    traj = dynamics.evolve_numeric(
        StateFamily.pure("phi1", amp, amp).initial_density(),
        rates,
        5.0,
        dt=dt,
        stride=max(int(0.02 / dt), 1),
        trace_drift_tol=np.inf,
    )
    worst = float(np.max(np.abs(traj.negativities - np.exp(-2.0 * traj.times))))
    return [CheckResult("maximal_decay_law", worst, 1e-6)]


def check_death_time(dt: float) -> list[CheckResult]:
    """Sudden-death time of phi1 at beta = 0.8 against its exact value ln 4."""
    report = esd.classify(
        StateFamily.pure("phi1", 0.6, 0.8), DecayRates(1.0, 1.0, 1.0), 10.0
    )
    if report.kind != esd.SUDDEN_DEATH:
        return [CheckResult("phi1_death_time", float("inf"), 1e-6)]
    return [CheckResult("phi1_death_time", abs(report.death_time - np.log(4.0)), 1e-6)]


def check_beta_threshold(dt: float) -> list[CheckResult]:
    scan = esd.scan_beta_boundary(
        DecayRates(1.0, 1.0, 1.0), np.linspace(0.55, 0.95, 9)
    )
    err = abs(scan.threshold - np.sqrt(0.5)) if scan.threshold is not None else float("inf")
    return [CheckResult("beta_threshold", err, 1e-3)]


def check_mixed_thresholds(dt: float) -> list[CheckResult]:
    """The four published sudden-death boundaries of the mixed family."""
    targets = (
        (0.02, 1.0, 0.302),
        (0.02, 0.0, 0.2775),
        (0.06, 1.0, 0.5493),
        (0.06, 0.0, 0.46295),
    )
    results = []
    for b, k, target in targets:
        rates = DecayRates(1.0, k, 1.0)
        grid = np.linspace(0.02, min(0.7, 1.0 - 3.0 * b - 1e-9), 12)
        scan = esd.scan_c_boundary(b, rates, grid)
        err = abs(scan.threshold - target) if scan.threshold is not None else float("inf")
        results.append(CheckResult(f"mixed_threshold_b{b:g}_k{k:g}", err, 5e-3))
    return results


CHECKS = (
    check_pt_spectrum,
    check_negativity_invariant,
    check_local_unitary_invariance,
    check_analytic_numeric_agreement,
    check_trajectory_structure,
    check_maximal_decay_law,
    check_death_time,
    check_beta_threshold,
    check_mixed_thresholds,
)


def run_all(dt: float = 1e-3, names: list[str] | None = None) -> list[CheckResult]:
    """Run the full check suite (or the named producers) and return results.

    ``dt`` feeds the integrator-backed checks; the analytic and scan
    checks are step-size independent.
    """
    results: list[CheckResult] = []
    for produce in CHECKS:
        if names is not None and produce.__name__ not in names:
            continue
        results.extend(produce(dt))
    return results
