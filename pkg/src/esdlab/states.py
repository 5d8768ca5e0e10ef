"""Qubit-qutrit (2x3) state algebra: partial transpose, negativity, Schmidt form.

Conventions used throughout the package:

* Pure states are length-6 complex vectors holding the amplitudes in
  ascending product order ``(a00, a01, a02, a10, a11, a12)`` where the
  first digit is the qubit level and the second the qutrit level.
* Density matrices are 6x6 complex arrays over the same product states
  listed in *descending* order ``|1,2>, |1,1>, |1,0>, |0,2>, |0,1>, |0,0>``.
  ``basis_index`` maps a level pair to its row.  The two orderings are
  mirror images: row ``r`` corresponds to amplitude index ``5 - r``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QUBIT_DIM = 2
QUTRIT_DIM = 3
DIM = QUBIT_DIM * QUTRIT_DIM

#: Ket labels of the density-matrix rows, in order.
BASIS_LABELS = ("|1,2>", "|1,1>", "|1,0>", "|0,2>", "|0,1>", "|0,0>")

NORM_TOL = 1e-12
TRACE_TOL = 1e-10
HERMITICITY_TOL = 1e-12
#: Partial-transpose eigenvalues in (-NEGATIVITY_EIG_TOL, 0) count as zero.
NEGATIVITY_EIG_TOL = 1e-10


def basis_index(qubit: int, qutrit: int) -> int:
    """Density-matrix row of the product state |qubit, qutrit>."""
    if qubit not in (0, 1):
        raise ValueError(f"qubit level must be 0 or 1, got {qubit}")
    if qutrit not in (0, 1, 2):
        raise ValueError(f"qutrit level must be 0, 1 or 2, got {qutrit}")
    return 3 * (1 - qubit) + (2 - qutrit)


def amplitude_index(qubit: int, qutrit: int) -> int:
    """Position of the |qubit, qutrit> amplitude in a pure-state vector."""
    basis_index(qubit, qutrit)  # reuse range validation
    return 3 * qubit + qutrit


def check_pure(psi: np.ndarray, tol: float = NORM_TOL) -> np.ndarray:
    """Validate a pure-state amplitude vector; returns it as complex ndarray."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (DIM,):
        raise ValueError(f"pure state must have shape ({DIM},), got {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise ValueError("pure state has non-finite amplitudes")
    norm_sq = float(np.sum(np.abs(psi) ** 2))
    if abs(norm_sq - 1.0) > tol:
        raise ValueError(f"pure state not normalized: sum |a|^2 = {norm_sq!r}")
    return psi


def check_density(rho: np.ndarray, *, psd: bool = False) -> np.ndarray:
    """Validate a density matrix (Hermitian, unit trace, optionally PSD)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"density matrix must be {DIM}x{DIM}, got {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    herm_defect = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_defect > HERMITICITY_TOL:
        raise ValueError(f"density matrix not Hermitian: defect {herm_defect:.3e}")
    trace_defect = abs(complex(np.trace(rho)) - 1.0)
    if trace_defect > TRACE_TOL:
        raise ValueError(f"density matrix trace off by {trace_defect:.3e}")
    if psd:
        lo = float(hermitian_eigenvalues(rho)[0])
        if lo < -NEGATIVITY_EIG_TOL:
            raise ValueError(f"density matrix not PSD: min eigenvalue {lo:.3e}")
    return rho


def pure_to_density(psi: np.ndarray) -> np.ndarray:
    """Projector |psi><psi| in the descending row basis."""
    psi = check_pure(psi)
    vec = psi[::-1]  # ascending amplitudes -> descending rows
    return np.outer(vec, vec.conj())


def partial_transpose(rho: np.ndarray, subsystem: str = "qutrit") -> np.ndarray:
    """Transpose the qubit or qutrit indices of a 6x6 bipartite matrix."""
    rho = check_density(rho)
    t = rho.reshape(QUBIT_DIM, QUTRIT_DIM, QUBIT_DIM, QUTRIT_DIM)
    if subsystem == "qutrit":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "qubit":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'qubit' or 'qutrit', got {subsystem!r}")
    return t.reshape(DIM, DIM)


def hermitian_eigenvalues(
    mat: np.ndarray,
    *,
    hermitian_tol: float = 1e-10,
    off_tol: float = 1e-13,
    max_sweeps: int = 100,
) -> np.ndarray:
    """Eigenvalues of a small Hermitian matrix, ascending.

    Cyclic Jacobi with complex plane rotations; a sweep visits every
    off-diagonal pair, convergence when the off-diagonal Frobenius norm
    drops below ``off_tol``.
    """
    a = np.asarray(mat, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got {a.shape}")
    defect = float(np.max(np.abs(a - a.conj().T))) if n else 0.0
    if defect > hermitian_tol:
        raise ValueError(f"matrix not Hermitian: defect {defect:.3e}")
    a = a.copy()

    for _ in range(max_sweeps):
        off = a - np.diag(np.diag(a))
        if float(np.linalg.norm(off)) < off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                w = apq.conjugate() / mag  # phase making a[p,q] real
                theta = 0.5 * np.arctan2(2.0 * mag, a[p, p].real - a[q, q].real)
                c = np.cos(theta)
                s = np.sin(theta)
                # A <- V^dag A V with V = I except V[p,p]=c, V[p,q]=-s,
                # V[q,p]=w*s, V[q,q]=w*c.
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + (w * s) * col_q
                a[:, q] = -s * col_p + (w * c) * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + (w.conjugate() * s) * row_q
                a[q, :] = -s * row_p + (w.conjugate() * c) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

    return np.sort(np.diag(a).real)


def negativity(rho: np.ndarray) -> float:
    """Twice the absolute sum of negative partial-transpose eigenvalues."""
    evals = hermitian_eigenvalues(partial_transpose(rho, "qutrit"))
    neg_sum = float(-np.sum(evals[evals <= -NEGATIVITY_EIG_TOL]))
    return 2.0 * neg_sum


def negative_pt_eigenvalue_count(rho: np.ndarray) -> int:
    """Number of partial-transpose eigenvalues below -NEGATIVITY_EIG_TOL."""
    evals = hermitian_eigenvalues(partial_transpose(rho, "qutrit"))
    return int(np.sum(evals <= -NEGATIVITY_EIG_TOL))


def negativity_invariant(psi: np.ndarray) -> float:
    """Local-unitary invariant of a pure state; negativity = 2*sqrt of it.

    Equals the determinant of the reduced qubit state, so it lies in
    [0, 1/4] with the maximum reached by maximally entangled states.
    """
    a1, a2, a3, a4, a5, a6 = check_pure(psi)
    f = (
        abs(a2) ** 2 * abs(a4) ** 2
        + abs(a3) ** 2 * abs(a4) ** 2
        + abs(a1) ** 2 * abs(a5) ** 2
        + abs(a3) ** 2 * abs(a5) ** 2
        + abs(a1) ** 2 * abs(a6) ** 2
        + abs(a2) ** 2 * abs(a6) ** 2
        - 2.0 * (a1 * a2.conjugate() * a4.conjugate() * a5).real
        - 2.0 * (a1 * a3.conjugate() * a4.conjugate() * a6).real
        - 2.0 * (a2 * a3.conjugate() * a5.conjugate() * a6).real
    )
    return max(f, 0.0)


def pure_pt_spectrum(psi: np.ndarray) -> np.ndarray:
    """Partial-transpose spectrum of a pure state, ascending.

    Every eigenvalue is a function of the single invariant f:
    {0, 0, -sqrt(f), sqrt(f), (1 -+ sqrt(1-4f))/2}.
    """
    f = negativity_invariant(psi)
    root = np.sqrt(f)
    disc = np.sqrt(max(1.0 - 4.0 * f, 0.0))
    return np.sort([0.0, 0.0, -root, root, 0.5 * (1.0 - disc), 0.5 * (1.0 + disc)])


def is_separable(rho: np.ndarray, tol: float = 1e-9) -> bool:
    """Separability test; in 2x3 zero negativity is necessary and sufficient."""
    return negativity(rho) < tol


@dataclass(frozen=True)
class SchmidtForm:
    """Canonical two-term form of a pure state.

    The state equals ``(U_A (x) U_B) (alpha |0,0> + sqrt(1-alpha^2) |1,1>)``
    where the unitaries act in ascending level order and
    ``alpha in [0, 1/sqrt(2)]``.
    """

    alpha: float
    qubit_rotation: np.ndarray
    qutrit_rotation: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Rebuild the amplitude vector (ascending order) from the form."""
        weights = np.array([self.alpha, np.sqrt(max(1.0 - self.alpha**2, 0.0))])
        psi = np.zeros(DIM, dtype=complex)
        for k in range(2):
            psi += weights[k] * np.kron(
                self.qubit_rotation[:, k], self.qutrit_rotation[:, k]
            )
        return psi


def _fix_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate a vector so its first non-negligible component is real >= 0."""
    for comp in v:
        if abs(comp) > tol:
            return v * (comp.conjugate() / abs(comp))
    return v


def _orthonormal_completion(w0: np.ndarray, w1: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to two orthonormal vectors in C^3."""
    return _fix_phase(np.cross(w0.conj(), w1.conj()))


def schmidt_decompose(psi: np.ndarray) -> SchmidtForm:
    """Schmidt form of a pure 2x3 state via the reduced qubit state.

    The 2x2 reduced state is diagonalized in closed form; the qutrit
    vectors follow by contracting the state with the qubit Schmidt basis.
    Each qubit Schmidt vector is phase-fixed (first nonzero component
    real non-negative) which makes the output deterministic; a degenerate
    reduced state falls back to the computational basis.
    """
    psi = check_pure(psi)
    m = psi.reshape(QUBIT_DIM, QUTRIT_DIM)
    red = m @ m.conj().T

    a = red[0, 0].real
    d = red[1, 1].real
    z = red[0, 1]
    split = np.sqrt(max((a - d) ** 2 + 4.0 * abs(z) ** 2, 0.0))
    lam_min = max(0.5 * (a + d - split), 0.0)
    lam_max = 0.5 * (a + d + split)

    if abs(z) > 1e-14:
        u_min = np.array([z, lam_min - a])
        u_max = np.array([z, lam_max - a])
        u_min = u_min / np.linalg.norm(u_min)
        u_max = u_max / np.linalg.norm(u_max)
    elif a <= d:
        u_min = np.array([1.0, 0.0], dtype=complex)
        u_max = np.array([0.0, 1.0], dtype=complex)
    else:
        u_min = np.array([0.0, 1.0], dtype=complex)
        u_max = np.array([1.0, 0.0], dtype=complex)
    u_min = _fix_phase(u_min)
    u_max = _fix_phase(u_max)

    s_min = np.sqrt(lam_min)
    s_max = np.sqrt(max(lam_max, 0.0))

    w_max = u_max.conj() @ m
    if s_max > 1e-14:
        w_max = w_max / s_max
    else:  # zero state cannot occur for normalized input
        w_max = np.array([1.0, 0.0, 0.0], dtype=complex)
    if s_min > 1e-14:
        w_min = (u_min.conj() @ m) / s_min
    else:
        # product state: any unit vector orthogonal to w_max works
        trial = np.zeros(QUTRIT_DIM, dtype=complex)
        trial[int(np.argmin(np.abs(w_max)))] = 1.0
        w_min = trial - (w_max.conj() @ trial) * w_max
        w_min = _fix_phase(w_min / np.linalg.norm(w_min))

    qubit_rotation = np.column_stack([u_min, u_max])
    qutrit_rotation = np.column_stack(
        [w_min, w_max, _orthonormal_completion(w_min, w_max)]
    )
    return SchmidtForm(
        alpha=float(min(s_min, np.sqrt(0.5))),
        qubit_rotation=qubit_rotation,
        qutrit_rotation=qutrit_rotation,
    )
