"""Entanglement sudden-death detection and phase-boundary scans.

A trajectory is *sudden death* when its negativity reaches zero at a
finite time and stays there, *asymptotic* when it remains positive up to
the scan horizon (with a log-linear tail), and *initially separable*
when it starts at zero.  Closed-form families are classified against an
exact zero; numeric trajectories against a small tolerance that absorbs
the eigensolver floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dynamics
from .dynamics import DecayRates, MixedFamilyParams, StateFamily
from .states import negativity

SUDDEN_DEATH = "sudden_death"
ASYMPTOTIC = "asymptotic"
INITIALLY_SEPARABLE = "initially_separable"

#: Numeric-path negativity below this value counts as zero.
DEFAULT_TOL = 1e-9
DEFAULT_HORIZON = 50.0
DEATH_GRID_POINTS = 512
DEATH_TIME_PRECISION = 1e-8
BOUNDARY_PRECISION = 1e-4

#: Scan-classification horizon in units of the slowest positive rate.
#: Kept short enough that surviving exponential tails are still above
#: the detection tolerance at the horizon while deaths near the boundary
#: have already happened.
SCAN_HORIZON_FACTOR = 5.5


class RevivalError(RuntimeError):
    """Negativity resurged after a detected death (not expected in this model)."""


class NonmonotoneScanError(RuntimeError):
    """Classifications along a sweep crossed the boundary more than once."""


@dataclass(frozen=True)
class EsdReport:
    """Classification of one negativity trajectory."""

    kind: str
    death_time: float | None = None
    residual_negativity: float | None = None
    tail_slope: float | None = None
    tail_residual: float | None = None


@dataclass
class BoundaryScan:
    """Result of sweeping one parameter across the sudden-death boundary."""

    fixed: dict[str, float]
    swept: str
    grid: np.ndarray
    reports: list[EsdReport]
    threshold: float | None


def death_time(
    neg,
    t_max: float,
    tol: float = DEFAULT_TOL,
    n_grid: int = DEATH_GRID_POINTS,
) -> float | None:
    """Earliest time the negativity falls to ``tol`` and stays there.

    Samples a coarse grid on [0, t_max], bisects the first crossing to
    absolute precision 1e-8 and then verifies the remaining samples; a
    resurgence raises RevivalError instead of being silently classified.
    Returns None when no crossing occurs.
    """
    ts = np.linspace(0.0, t_max, n_grid)
    values = np.array([neg(t) for t in ts])
    if values[0] <= tol:
        raise ValueError(f"negativity at t=0 is {values[0]!r}, already <= tol")
    below = np.nonzero(values <= tol)[0]
    if below.size == 0:
        return None
    first = int(below[0])
    revived = np.nonzero(values[first:] > tol)[0]
    if revived.size:
        raise RevivalError(
            f"negativity rose above {tol:g} again at t={ts[first + int(revived[0])]:g}"
        )
    lo, hi = ts[first - 1], ts[first]
    while hi - lo > DEATH_TIME_PRECISION:
        mid = 0.5 * (lo + hi)
        if neg(mid) <= tol:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _closed_form_negativity(family: StateFamily, rates: DecayRates):
    """Exact negativity-vs-time callable, or None if the family has none."""
    if family.tag == "phi1":
        return lambda t: dynamics.negativity_phi1_closed(family.beta, rates, t)
    if family.tag in ("phi2plus", "phi2minus"):
        return lambda t: dynamics.negativity_phi2_closed(
            abs(family.alpha), abs(family.beta), rates, t
        )
    return None


def _tail_fit(ts: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    """Least-squares slope of log-negativity and its max residual.

    Fitted over the final decade of the sampled window; non-positive
    samples are excluded (they only occur at the floor).
    """
    mask = (ts >= ts[-1] / 10.0) & (values > 0.0)
    if int(mask.sum()) < 3:
        return float("nan"), float("nan")
    x = ts[mask]
    y = np.log(values[mask])
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.max(np.abs(design @ coef - y)))
    return float(coef[0]), residual


class _NumericSampler:
    """Negativity of a numerically evolved state, resolvable at any time.

    One dense evolution provides the coarse samples; pointwise queries
    re-evolve from the nearest stored snapshot at or before the query,
    so bisection refinement stays cheap.
    """

    def __init__(
        self, rho0: np.ndarray, rates: DecayRates, horizon: float, dt: float, n_grid: int
    ):
        steps = max(int(np.ceil(horizon / dt)), 1)
        stride = max(steps // n_grid, 1)
        self.traj = dynamics.evolve_numeric(rho0, rates, horizon, dt=dt, stride=stride)
        self.rates = rates
        self.dt = dt
        self._cache: dict[float, float] = {}

    def __call__(self, t: float) -> float:
        cached = self._cache.get(t)
        if cached is not None:
            return cached
        idx = int(np.searchsorted(self.traj.times, t, side="right") - 1)
        base_t = self.traj.times[idx]
        if abs(t - base_t) < 1e-12:
            value = float(self.traj.negativities[idx])
        else:
            segment = dynamics.evolve_numeric(
                self.traj.states[idx],
                self.rates,
                t - base_t,
                dt=self.dt,
                stride=10**9,
            )
            value = float(segment.negativities[-1])
        self._cache[t] = value
        return value


def classify(
    family: StateFamily,
    rates: DecayRates,
    horizon: float = DEFAULT_HORIZON,
    *,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
    dt: float = 1e-3,
    n_grid: int = DEATH_GRID_POINTS,
) -> EsdReport:
    """Classify a family's negativity trajectory up to ``horizon``.

    ``method`` is ``"auto"`` (closed form when the family has one),
    ``"closed"`` or ``"numeric"``.  Closed forms are exact, so they are
    tested against zero and any horizon works.  The numeric and
    mixed-family paths test against ``tol``: choose a horizon at which a
    surviving exponential tail would still exceed ``tol``, or the decayed
    tail is indistinguishable from death.
    """
    if method not in ("auto", "closed", "numeric"):
        raise ValueError(f"unknown method {method!r}")

    neg = None
    effective_tol = tol
    if method != "numeric":
        neg = _closed_form_negativity(family, rates)
        if neg is not None:
            effective_tol = 0.0
        elif method == "closed":
            raise ValueError(f"family {family.tag!r} has no closed-form negativity")
    if neg is None and family.tag == "mixed":
        neg = lambda t: negativity(  # noqa: E731
            dynamics.evolve_mixed_analytic(family.mixed, rates, t)
        )
    if neg is None:
        neg = _NumericSampler(family.initial_density(), rates, horizon, dt, n_grid)

    if neg(0.0) <= effective_tol:
        return EsdReport(kind=INITIALLY_SEPARABLE)

    t_star = death_time(neg, horizon, tol=effective_tol, n_grid=n_grid)
    if t_star is not None:
        return EsdReport(kind=SUDDEN_DEATH, death_time=t_star)

    ts = np.linspace(0.0, horizon, n_grid)
    values = np.array([neg(t) for t in ts])
    slope, residual = _tail_fit(ts, values)
    return EsdReport(
        kind=ASYMPTOTIC,
        residual_negativity=float(values[-1]),
        tail_slope=slope,
        tail_residual=residual,
    )


def _kind_sequence_boundary(kinds: list[str], order: dict[str, int], what: str) -> None:
    """Require classifications to be monotone along the sweep."""
    ranks = [order[k] for k in kinds]
    if any(b < a for a, b in zip(ranks, ranks[1:])):
        raise NonmonotoneScanError(
            f"{what}: classification sequence {kinds} crosses the boundary "
            "more than once"
        )


def _bisect_predicate(lo: float, hi: float, is_lo_side, precision: float) -> float:
    """Boundary of a monotone predicate: True at lo, False at hi."""
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if is_lo_side(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_beta_boundary(
    rates: DecayRates,
    grid: np.ndarray,
    *,
    horizon: float = DEFAULT_HORIZON,
    precision: float = BOUNDARY_PRECISION,
) -> BoundaryScan:
    """Sweep beta for the phi1 family; threshold = smallest sudden-death beta."""
    grid = np.asarray(grid, dtype=float)
    if np.any((grid <= 0.0) | (grid >= 1.0)):
        raise ValueError("beta grid must lie strictly inside (0, 1)")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("beta grid must be strictly increasing")

    def classify_beta(beta: float) -> EsdReport:
        alpha = np.sqrt(max(1.0 - beta**2, 0.0))
        return classify(StateFamily.pure("phi1", alpha, beta), rates, horizon)

    reports = [classify_beta(b) for b in grid]
    kinds = [r.kind for r in reports]
    _kind_sequence_boundary(
        kinds, {ASYMPTOTIC: 0, SUDDEN_DEATH: 1, INITIALLY_SEPARABLE: 2}, "beta scan"
    )

    threshold = None
    if SUDDEN_DEATH in kinds:
        first_sd = kinds.index(SUDDEN_DEATH)
        if first_sd == 0:
            threshold = float(grid[0])
        else:
            threshold = _bisect_predicate(
                float(grid[first_sd - 1]),
                float(grid[first_sd]),
                lambda b: classify_beta(b).kind != SUDDEN_DEATH,
                precision,
            )
    return BoundaryScan(
        fixed={
            "gamma": rates.gamma,
            "gamma1": rates.gamma1,
            "gamma2": rates.gamma2,
        },
        swept="beta",
        grid=grid,
        reports=reports,
        threshold=threshold,
    )


def scan_c_boundary(
    b: float,
    rates: DecayRates,
    grid: np.ndarray,
    *,
    horizon: float | None = None,
    tol: float = DEFAULT_TOL,
    precision: float = BOUNDARY_PRECISION,
) -> BoundaryScan:
    """Sweep c at fixed b for the mixed family; threshold = largest
    sudden-death c.

    The classification horizon defaults to a few units of the slowest
    positive rate: long enough that every death below the boundary is
    observed, short enough that surviving tails just above it remain
    resolvable at the horizon.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("c grid must be strictly increasing")
    for c in grid:
        if 0.5 * (1.0 - 3.0 * b - c) < -1e-14:
            raise ValueError(f"grid point c={c!r} gives negative a for b={b!r}")
    if horizon is None:
        horizon = SCAN_HORIZON_FACTOR / rates.min_positive()

    def classify_c(c: float) -> EsdReport:
        family = StateFamily.from_mixed(MixedFamilyParams.from_bc(b, c))
        return classify(family, rates, horizon, tol=tol)

    reports = [classify_c(c) for c in grid]
    kinds = [r.kind for r in reports]
    _kind_sequence_boundary(
        kinds, {INITIALLY_SEPARABLE: 0, SUDDEN_DEATH: 1, ASYMPTOTIC: 2}, "c scan"
    )

    threshold = None
    if SUDDEN_DEATH in kinds:
        last_sd = len(kinds) - 1 - kinds[::-1].index(SUDDEN_DEATH)
        if last_sd == len(kinds) - 1:
            threshold = float(grid[-1])
        else:
            threshold = _bisect_predicate(
                float(grid[last_sd]),
                float(grid[last_sd + 1]),
                lambda c: classify_c(c).kind == SUDDEN_DEATH,
                precision,
            )
    return BoundaryScan(
        fixed={
            "b": b,
            "gamma": rates.gamma,
            "gamma1": rates.gamma1,
            "gamma2": rates.gamma2,
            "horizon": horizon,
        },
        swept="c",
        grid=grid,
        reports=reports,
        threshold=threshold,
    )
