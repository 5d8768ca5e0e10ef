"""Dissipative time evolution of a qubit-qutrit pair.

The model is purely dissipative: three independent spontaneous-emission
channels (qubit 1->0 at rate gamma, qutrit 2->0 at gamma2, qutrit 1->0 at
gamma1) acting on two non-interacting atoms in vacuum.  A fixed-step RK4
integrator handles arbitrary initial states; the phi1/phi2/mixed families
also have exact matrix-element solutions and closed-form negativities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import states
from .states import DIM, basis_index, check_density, negativity


@dataclass(frozen=True)
class DecayRates:
    """Spontaneous-emission rates (inverse time units).

    gamma: qubit |1> -> |0>;  gamma1: qutrit |1> -> |0>;
    gamma2: qutrit |2> -> |0>.
    """

    gamma: float
    gamma1: float
    gamma2: float

    def __post_init__(self) -> None:
        for name in ("gamma", "gamma1", "gamma2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")

    def min_positive(self) -> float:
        """Smallest strictly positive rate."""
        positive = [r for r in (self.gamma, self.gamma1, self.gamma2) if r > 0.0]
        if not positive:
            raise ValueError("all decay rates are zero")
        return min(positive)


def interference_k(rates: DecayRates) -> float:
    """Rate ratio gamma1/gamma2; 1 means no interference, 0 maximal."""
    if rates.gamma2 <= 0.0:
        raise ValueError("interference ratio undefined for gamma2 = 0")
    return rates.gamma1 / rates.gamma2


@dataclass(frozen=True)
class MixedFamilyParams:
    """Weights (a, b, c) of the two-parameter mixed family; 2a+3b+c = 1."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < -1e-14:
                raise ValueError(f"{name} must be >= 0, got {value!r}")
        total = 2.0 * self.a + 3.0 * self.b + self.c
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"2a + 3b + c must equal 1, got {total!r}")

    @classmethod
    def from_bc(cls, b: float, c: float) -> "MixedFamilyParams":
        """Fix a from the trace constraint; rejects negative a."""
        a = 0.5 * (1.0 - 3.0 * b - c)
        if a < -1e-14:
            raise ValueError(
                f"no valid family member for b={b!r}, c={c!r} (a would be {a!r})"
            )
        return cls(a=max(a, 0.0), b=b, c=c)


PURE_FAMILY_TAGS = ("phi1", "phi2plus", "phi2minus", "phi2prime", "phi3plus", "phi3minus")

# (qubit, qutrit) levels of the alpha and beta branches of each pure family,
# plus the sign multiplying beta.
_PURE_FAMILY_BRANCHES = {
    "phi1": ((0, 0), (1, 1), 1.0),
    "phi2plus": ((0, 1), (1, 2), 1.0),
    "phi2minus": ((0, 1), (1, 2), -1.0),
    "phi2prime": ((0, 2), (1, 1), 1.0),
    "phi3plus": ((0, 2), (1, 0), 1.0),
    "phi3minus": ((0, 2), (1, 0), -1.0),
}


@dataclass(frozen=True)
class StateFamily:
    """A named initial state: one of the pure two-branch families, the
    (a, b, c) mixed family, or a custom density matrix."""

    tag: str
    alpha: float = 0.0
    beta: float = 0.0
    mixed: MixedFamilyParams | None = None
    custom: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.tag in PURE_FAMILY_TAGS:
            norm = self.alpha**2 + self.beta**2
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"alpha^2 + beta^2 must be 1, got {norm!r}")
            if self.mixed is not None or self.custom is not None:
                raise ValueError("pure family takes only alpha and beta")
        elif self.tag == "mixed":
            if self.mixed is None:
                raise ValueError("mixed family requires MixedFamilyParams")
            if self.custom is not None:
                raise ValueError("mixed family takes no custom matrix")
        elif self.tag == "custom":
            if self.custom is None:
                raise ValueError("custom family requires a density matrix")
            check_density(self.custom)
        else:
            raise ValueError(f"unknown family tag {self.tag!r}")

    @classmethod
    def pure(cls, tag: str, alpha: float, beta: float) -> "StateFamily":
        return cls(tag=tag, alpha=alpha, beta=beta)

    @classmethod
    def from_mixed(cls, params: MixedFamilyParams) -> "StateFamily":
        return cls(tag="mixed", mixed=params)

    @classmethod
    def from_density(cls, rho: np.ndarray) -> "StateFamily":
        return cls(tag="custom", custom=np.asarray(rho, dtype=complex))

    def state_vector(self) -> np.ndarray:
        """Amplitude vector (ascending order) of a pure family."""
        if self.tag not in PURE_FAMILY_TAGS:
            raise ValueError(f"family {self.tag!r} is not a pure two-branch state")
        (ia, ja), (ib, jb), sign = _PURE_FAMILY_BRANCHES[self.tag]
        psi = np.zeros(DIM, dtype=complex)
        psi[states.amplitude_index(ia, ja)] = self.alpha
        psi[states.amplitude_index(ib, jb)] = sign * self.beta
        return psi

    def initial_density(self) -> np.ndarray:
        if self.tag in PURE_FAMILY_TAGS:
            return states.pure_to_density(self.state_vector())
        if self.tag == "mixed":
            return mixed_family_density(self.mixed)
        return check_density(self.custom)


def mixed_family_density(params: MixedFamilyParams) -> np.ndarray:
    """Initial density matrix of the (a, b, c) family."""
    a, b, c = params.a, params.b, params.c
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[basis_index(1, 2), basis_index(1, 2)] = a  # |12>
    rho[basis_index(0, 2), basis_index(0, 2)] = a  # |02>
    rho[basis_index(1, 1), basis_index(1, 1)] = b  # |11>
    rho[basis_index(0, 0), basis_index(0, 0)] = b  # |00>
    r10 = basis_index(1, 0)
    r01 = basis_index(0, 1)
    rho[r10, r10] = 0.5 * (b + c)
    rho[r01, r01] = 0.5 * (b + c)
    rho[r10, r01] = 0.5 * (b - c)
    rho[r01, r10] = 0.5 * (b - c)
    return rho


def asymptotic_state() -> np.ndarray:
    """Ground-ground projector every trajectory approaches when all rates > 0."""
    rho = np.zeros((DIM, DIM), dtype=complex)
    g = basis_index(0, 0)
    rho[g, g] = 1.0
    return rho


def jump_operators(rates: DecayRates) -> list[tuple[float, np.ndarray]]:
    """(rate, lowering operator) pairs in the 6x6 descending row basis."""
    qubit_low = np.zeros((2, 2))
    qubit_low[1, 0] = 1.0  # |0><1|, rows ordered |1>, |0>
    qutrit_low_1 = np.zeros((3, 3))
    qutrit_low_1[2, 1] = 1.0  # |0><1|, rows ordered |2>, |1>, |0>
    qutrit_low_2 = np.zeros((3, 3))
    qutrit_low_2[2, 0] = 1.0  # |0><2|
    return [
        (rates.gamma, np.kron(qubit_low, np.eye(3))),
        (rates.gamma2, np.kron(np.eye(2), qutrit_low_2)),
        (rates.gamma1, np.kron(np.eye(2), qutrit_low_1)),
    ]


def dissipator(rho: np.ndarray, rates: DecayRates) -> np.ndarray:
    """Right-hand side d(rho)/dt of the master equation."""
    rho = check_density(rho)
    out = np.zeros_like(rho)
    for rate, low in jump_operators(rates):
        if rate == 0.0:
            continue
        number = low.T @ low  # projector onto the decaying level
        out += rate * (low @ rho @ low.T - 0.5 * (number @ rho + rho @ number))
    return out


def lindblad_superoperator(rates: DecayRates) -> np.ndarray:
    """36x36 generator acting on row-major vec(rho)."""
    sup = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    eye = np.eye(DIM)
    for rate, low in jump_operators(rates):
        if rate == 0.0:
            continue
        number = low.T @ low
        sup += rate * (
            np.kron(low, low.conj())
            - 0.5 * np.kron(number, eye)
            - 0.5 * np.kron(eye, number.conj())
        )
    return sup


def _rk4_propagator(sup: np.ndarray, h: float) -> np.ndarray:
    """Single-step RK4 map for the linear autonomous system d(vec)/dt = S vec.

    For such systems classic RK4 collapses to the degree-4 Taylor
    polynomial of exp(h S).
    """
    hs = h * sup
    eye = np.eye(sup.shape[0], dtype=complex)
    return eye + hs + hs @ hs / 2.0 + hs @ hs @ hs / 6.0 + hs @ hs @ hs @ hs / 24.0


@dataclass
class Trajectory:
    """Stored snapshots of a numeric evolution."""

    times: np.ndarray
    states: list[np.ndarray]
    negativities: np.ndarray


def evolve_numeric(
    initial: np.ndarray,
    rates: DecayRates,
    t_end: float,
    dt: float = 1e-3,
    stride: int = 10,
    *,
    trace_drift_tol: float = 1e-7,
    hermiticity_tol: float = 1e-9,
) -> Trajectory:
    """Fixed-step RK4 evolution, storing every ``stride``-th step.

    The initial state and the final time are always stored.  Stored
    states are re-validated; trace drift beyond ``trace_drift_tol``
    aborts the run (the step size is too large for the requested rates).
    """
    rho0 = check_density(initial)
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if t_end < 0.0:
        raise ValueError(f"t_end must be >= 0, got {t_end!r}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride!r}")

    times = [0.0]
    stored = [rho0.copy()]
    if t_end > 0.0:
        sup = lindblad_superoperator(rates)
        n_full = int(np.floor(t_end / dt + 1e-12))
        remainder = t_end - n_full * dt
        step = _rk4_propagator(sup, dt)
        vec = rho0.reshape(-1).copy()

        def _store(t: float, v: np.ndarray) -> None:
            rho = v.reshape(DIM, DIM)
            drift = abs(complex(np.trace(rho)) - 1.0)
            if drift > trace_drift_tol:
                raise RuntimeError(
                    f"trace drift {drift:.3e} at t={t:g} exceeds {trace_drift_tol:g}; "
                    "reduce dt"
                )
            defect = float(np.max(np.abs(rho - rho.conj().T)))
            if defect > hermiticity_tol:
                raise RuntimeError(f"hermiticity defect {defect:.3e} at t={t:g}")
            times.append(t)
            stored.append(rho.copy())

        for k in range(1, n_full + 1):
            vec = step @ vec
            if k % stride == 0 and not (k == n_full and remainder <= 1e-15):
                _store(k * dt, vec)
        if remainder > 1e-15:
            vec = _rk4_propagator(sup, remainder) @ vec
        _store(t_end, vec)

    negs = np.array([negativity(r) for r in stored])
    return Trajectory(times=np.array(times), states=stored, negativities=negs)


# ---------------------------------------------------------------------------
# Exact solutions for the analytic families.
# ---------------------------------------------------------------------------


def evolve_phi1_analytic(
    alpha: float, beta: float, rates: DecayRates, t: float, sign: float = 1.0
) -> np.ndarray:
    """Exact state at time t for alpha|0,0> + sign*beta|1,1>.

    gamma2 never enters: qutrit level 2 is not populated.
    """
    _check_pure_params(alpha, beta, t)
    u = np.exp(-rates.gamma * t)
    v = np.exp(-rates.gamma1 * t)
    rho = np.zeros((DIM, DIM), dtype=complex)
    b2 = beta**2
    rho[basis_index(1, 1), basis_index(1, 1)] = b2 * u * v
    coh = sign * alpha * beta * np.sqrt(u * v)
    rho[basis_index(1, 1), basis_index(0, 0)] = coh
    rho[basis_index(0, 0), basis_index(1, 1)] = coh
    rho[basis_index(1, 0), basis_index(1, 0)] = b2 * (u - u * v)
    rho[basis_index(0, 1), basis_index(0, 1)] = b2 * (v - u * v)
    diag = np.diag(rho).real
    rho[basis_index(0, 0), basis_index(0, 0)] = 1.0 - diag.sum()
    return rho


def evolve_phi2_analytic(
    alpha: float, beta: float, rates: DecayRates, t: float, sign: float = 1.0
) -> np.ndarray:
    """Exact state at time t for alpha|0,1> + sign*beta|1,2>."""
    _check_pure_params(alpha, beta, t)
    u = np.exp(-rates.gamma * t)
    v = np.exp(-rates.gamma1 * t)
    w = np.exp(-rates.gamma2 * t)
    rho = np.zeros((DIM, DIM), dtype=complex)
    b2 = beta**2
    rho[basis_index(1, 2), basis_index(1, 2)] = b2 * u * w
    coh = sign * alpha * beta * np.sqrt(u * v * w)
    rho[basis_index(1, 2), basis_index(0, 1)] = coh
    rho[basis_index(0, 1), basis_index(1, 2)] = coh
    rho[basis_index(1, 0), basis_index(1, 0)] = b2 * (u - u * w)
    rho[basis_index(0, 2), basis_index(0, 2)] = b2 * (w - u * w)
    rho[basis_index(0, 1), basis_index(0, 1)] = alpha**2 * v
    diag = np.diag(rho).real
    rho[basis_index(0, 0), basis_index(0, 0)] = 1.0 - diag.sum()
    return rho


def mixed_family_elements(
    params: MixedFamilyParams,
    gamma_t: np.ndarray | float,
    gamma1_t: np.ndarray | float,
    gamma2_t: np.ndarray | float,
) -> dict[str, np.ndarray]:
    """Nonzero matrix elements of the evolved mixed family.

    Accepts scalar or broadcastable arrays of the three dimensionless
    dissipation factors.  Keys name the populated product states; 'coh'
    is the |1,0><0,1| coherence.  The ground population closes the trace.
    """
    a, b, c = params.a, params.b, params.c
    u = np.exp(-np.asarray(gamma_t, dtype=float))
    v = np.exp(-np.asarray(gamma1_t, dtype=float))
    w = np.exp(-np.asarray(gamma2_t, dtype=float))
    p12 = a * u * w
    p11 = b * u * v
    p10 = 0.5 * u * (1.0 - 2.0 * (b * v + a * w))
    p02 = a * (2.0 * w - u * w)
    p01 = 0.5 * (3.0 * b + c) * v - b * u * v
    coh = 0.5 * (b - c) * np.sqrt(u * v)
    p00 = 1.0 - (p12 + p11 + p10 + p02 + p01)
    return {
        "p12": p12,
        "p11": p11,
        "p10": p10,
        "p02": p02,
        "p01": p01,
        "p00": p00,
        "coh": coh,
    }


def evolve_mixed_analytic(
    params: MixedFamilyParams, rates: DecayRates, t: float
) -> np.ndarray:
    """Exact state at time t for the (a, b, c) mixed family."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    el = mixed_family_elements(
        params, rates.gamma * t, rates.gamma1 * t, rates.gamma2 * t
    )
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[basis_index(1, 2), basis_index(1, 2)] = el["p12"]
    rho[basis_index(1, 1), basis_index(1, 1)] = el["p11"]
    rho[basis_index(1, 0), basis_index(1, 0)] = el["p10"]
    rho[basis_index(0, 2), basis_index(0, 2)] = el["p02"]
    rho[basis_index(0, 1), basis_index(0, 1)] = el["p01"]
    rho[basis_index(0, 0), basis_index(0, 0)] = el["p00"]
    rho[basis_index(1, 0), basis_index(0, 1)] = el["coh"]
    rho[basis_index(0, 1), basis_index(1, 0)] = el["coh"]
    return rho


# ---------------------------------------------------------------------------
# Closed-form negativities.
# ---------------------------------------------------------------------------


def phi1_negativity_unclamped(
    beta: float, gamma_t: np.ndarray | float, gamma1_t: np.ndarray | float
) -> np.ndarray | float:
    """Signed negativity of the evolved phi1 family (negative once separable).

    Evaluated in a cancellation-free form: with u = exp(-gamma t),
    v = exp(-gamma1 t) the value is

        sqrt(beta^4 (u-v)^2 + 4 alpha^2 beta^2 u v) - beta^2 (u + v - 2uv)

    whose sign equals the sign of g = 1 - beta^2 (1 + (1-u)(1-v)); the
    positive branch is computed as 4 beta^2 u v g / (sum of the two terms)
    so tails near the death boundary keep full relative precision.
    """
    b2 = beta**2
    a2 = 1.0 - b2
    u = np.exp(-np.asarray(gamma_t, dtype=float))
    v = np.exp(-np.asarray(gamma1_t, dtype=float))
    root = np.sqrt(b2 * b2 * (u - v) ** 2 + 4.0 * a2 * b2 * u * v)
    shift = b2 * (u + v - 2.0 * u * v)
    # root^2 - shift^2 factors exactly, so the quotient below carries the
    # sign of g even where the direct difference would round to noise.
    g = (1.0 - 2.0 * b2) + b2 * (u + v - u * v)
    denom = root + shift
    safe = np.where(denom > 0.0, denom, 1.0)
    return np.where(denom > 0.0, 4.0 * b2 * u * v * g / safe, 0.0)


def negativity_phi1_closed(beta: float, rates: DecayRates, t: float) -> float:
    """Closed-form negativity of the evolved phi1 family (clamped at zero)."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be in [0, 1], got {beta!r}")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    value = float(phi1_negativity_unclamped(beta, rates.gamma * t, rates.gamma1 * t))
    return max(value, 0.0)


def phi2_negativity(
    alpha: float,
    beta: float,
    gamma_t: np.ndarray | float,
    gamma1_t: np.ndarray | float,
    gamma2_t: np.ndarray | float,
) -> np.ndarray | float:
    """Negativity of the evolved phi2 family; strictly positive for alpha*beta != 0.

    Computed from the partially transposed 2x2 block as
    4c^2 / (sqrt(p^2 + 4c^2) + p) with p the |0,2> population and c the
    surviving coherence, which avoids the cancellation the textbook
    difference form suffers at large times.
    """
    u = np.exp(-np.asarray(gamma_t, dtype=float))
    v = np.exp(-np.asarray(gamma1_t, dtype=float))
    w = np.exp(-np.asarray(gamma2_t, dtype=float))
    p = beta**2 * (w - u * w)
    c_sq = alpha**2 * beta**2 * u * v * w
    denom = np.sqrt(p * p + 4.0 * c_sq) + p
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(denom > 0.0, 4.0 * c_sq / np.where(denom > 0.0, denom, 1.0), 0.0)
    return value


def negativity_phi2_closed(
    alpha: float, beta: float, rates: DecayRates, t: float
) -> float:
    """Closed-form negativity of the evolved phi2 family."""
    _check_pure_params(alpha, beta, t)
    return float(
        phi2_negativity(alpha, beta, rates.gamma * t, rates.gamma1 * t, rates.gamma2 * t)
    )


def mixed_negativity_unclamped(
    params: MixedFamilyParams,
    gamma_t: np.ndarray | float,
    gamma1_t: np.ndarray | float,
    gamma2_t: np.ndarray | float,
) -> np.ndarray | float:
    """Signed negativity of the evolved mixed family.

    The partial transpose moves the surviving coherence next to the
    |1,1> and |0,0> populations; the only candidate negative eigenvalue
    lives in that 2x2 block.  Sign and value come from the quotient form
    so late-time tails do not lose their sign to rounding.
    """
    el = mixed_family_elements(params, gamma_t, gamma1_t, gamma2_t)
    p11, p00, z = el["p11"], el["p00"], el["coh"]
    root = np.sqrt((p11 - p00) ** 2 + 4.0 * z * z)
    u = np.exp(-np.asarray(gamma_t, dtype=float))
    v = np.exp(-np.asarray(gamma1_t, dtype=float))
    # z^2 - p11*p00 = u*v * (((b-c)/2)^2 - b*p00): factored discriminant
    disc = u * v * (0.25 * (params.b - params.c) ** 2 - params.b * p00)
    denom = root + p11 + p00
    safe = np.where(denom > 0.0, denom, 1.0)
    return np.where(denom > 0.0, 4.0 * disc / safe, 0.0)


def negativity_mixed_closed(
    params: MixedFamilyParams, rates: DecayRates, t: float
) -> float:
    """Negativity of the evolved mixed family via its 2x2 block, clamped."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    value = float(
        mixed_negativity_unclamped(
            params, rates.gamma * t, rates.gamma1 * t, rates.gamma2 * t
        )
    )
    return max(value, 0.0)


def _check_pure_params(alpha: float, beta: float, t: float) -> None:
    if abs(alpha**2 + beta**2 - 1.0) > 1e-12:
        raise ValueError(f"alpha^2 + beta^2 must be 1, got {alpha**2 + beta**2!r}")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
