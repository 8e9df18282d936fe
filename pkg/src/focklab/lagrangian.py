"""Symplectic linear algebra: Lagrangian frames, vertical rotations, invariance.

A frame is n real vectors spanning an n-plane of R^{2n}; the plane is
Lagrangian when the standard symplectic form vanishes on it.  Under the
identification (x, y) <-> x + iy such a plane is U . R^n for a unitary U,
and X = i U* rotates it onto the vertical plane i R^n.  Any two valid
rotations differ by a real orthogonal factor on the left.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .basis import BasisSet, weyl_matrix
from .indices import HalfIndex
from .measures import DEFAULT_ORDER, pushforward
from .toeplitz import (
    OperatorMatrix,
    assemble_real_coderivative,
    assemble_toeplitz,
    berezin_measure,
    interior_max_norm,
)

LAGRANGIAN_TOL = 1e-12


def symplectic_matrix(n: int) -> np.ndarray:
    """The standard 2n x 2n symplectic matrix J = [[0, I], [-I, 0]]."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def symplectic_defect(vectors: np.ndarray) -> float:
    """max_ij |omega_0(b_i, b_j)| over the frame vectors (rows of shape (n, 2n))."""
    v = np.asarray(vectors, dtype=float)
    n = v.shape[0]
    if v.shape != (n, 2 * n):
        raise ValueError(f"frame must be n vectors in R^(2n), got shape {v.shape}")
    omega = (symplectic_matrix(n) @ v.T).T @ v.T
    return float(np.max(np.abs(omega)))


def is_lagrangian(vectors, tol: float = LAGRANGIAN_TOL) -> tuple[bool, float]:
    """Whether the span is a Lagrangian plane, and the worst form violation."""
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    defect = symplectic_defect(v)
    full_rank = np.linalg.matrix_rank(v, tol=1e-10) == v.shape[0]
    return bool(defect <= tol and full_rank), defect


def complex_identification(vectors) -> np.ndarray:
    """Columns c_j = x_j + i y_j of the frame under (x, y) <-> x + iy."""
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    n = v.shape[0]
    return (v[:, :n] + 1j * v[:, n:]).T


@dataclass(frozen=True, eq=False)
class LagrangianFrame:
    """A validated Lagrangian frame with its cached vertical rotation."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        ok, defect = is_lagrangian(v)
        if not ok:
            raise ValueError(f"frame is not Lagrangian (max |omega_0| = {defect:.2e} or rank-deficient)")
        object.__setattr__(self, "vectors", v)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @cached_property
    def rotation(self) -> np.ndarray:
        return rotation_to_vertical(self.vectors)


def rotation_to_vertical(frame) -> np.ndarray:
    """A unitary X with X L = i R^n, deterministic given the frame.

    The complex-identified frame matrix C has real Gram C*C exactly when the
    plane is Lagrangian; polar orthonormalization U = C (C*C)^{-1/2} spans the
    same plane, and X = i U* is vertical-rotating.  The leftover real
    orthogonal gauge is fixed by sign-canonicalizing rows: the first
    above-tolerance entry of each row of X gets a positive imaginary part
    (positive real part as tie-break).
    """
    vectors = frame.vectors if isinstance(frame, LagrangianFrame) else np.atleast_2d(np.asarray(frame, dtype=float))
    ok, defect = is_lagrangian(vectors)
    if not ok:
        raise ValueError(f"frame is not Lagrangian (max |omega_0| = {defect:.2e} or rank-deficient)")
    c = complex_identification(vectors)
    gram = c.conj().T @ c
    if np.max(np.abs(gram.imag)) > 1e-10:
        raise ValueError("identified frame has a non-real Gram matrix; plane is not Lagrangian")
    evals, evecs = np.linalg.eigh(gram.real)
    if np.min(evals) < 1e-12 * np.max(evals):
        raise ValueError("frame is numerically degenerate; cannot orthonormalize")
    inv_sqrt = (evecs / np.sqrt(evals)) @ evecs.T
    u = c @ inv_sqrt
    x = 1j * u.conj().T
    for i in range(x.shape[0]):
        row = x[i]
        j = int(np.argmax(np.abs(row) > 1e-9))
        lead = row[j]
        if lead.imag < 0 or (abs(lead.imag) <= 1e-12 and lead.real < 0):
            x[i] = -row
    return x


def rotation_defect(frame, x: np.ndarray) -> float:
    """How far X is from a valid vertical rotation of the frame.

    Max of the unitarity defect and |Re(X c_j)| over the identified frame
    columns; <= 1e-12 certifies X L = i R^n at working precision.
    """
    vectors = frame.vectors if isinstance(frame, LagrangianFrame) else np.atleast_2d(np.asarray(frame, dtype=float))
    c = complex_identification(vectors)
    c = c / np.linalg.norm(c, axis=0, keepdims=True)
    x = np.asarray(x, dtype=complex)
    unitarity = float(np.max(np.abs(x.conj().T @ x - np.eye(x.shape[0]))))
    vertical = float(np.max(np.abs((x @ c).real)))
    return max(unitarity, vertical)


def vx_matrix(x: np.ndarray, basis: BasisSet) -> np.ndarray:
    """Matrix of V_X f(z) = f(X* z) on the truncated basis.

    V_X preserves total degree, so it is materialized blockwise and stays
    exactly unitary in truncation.
    """
    x = np.asarray(x, dtype=complex)
    n = basis.n
    xstar = x.conj().T
    entries = np.zeros((basis.size, basis.size), dtype=complex)
    for col, alpha in enumerate(basis.indices):
        # expand prod_j (sum_m xstar[j,m] z_m)^{alpha_j} into monomial coefficients
        coeffs = {(0,) * n: 1.0 + 0.0j}
        for j in range(n):
            for _ in range(alpha[j]):
                new: dict = {}
                for idx, cv in coeffs.items():
                    for m in range(n):
                        if xstar[j, m] == 0:
                            continue
                        nidx = tuple(v + (1 if t == m else 0) for t, v in enumerate(idx))
                        new[nidx] = new.get(nidx, 0.0 + 0.0j) + cv * xstar[j, m]
                coeffs = new
        for idx, cv in coeffs.items():
            row = basis.position[idx]
            entries[row, col] = cv * basis.sqrt_factorials[row] / basis.sqrt_factorials[col]
    return entries


@dataclass(frozen=True)
class InvarianceReport:
    """Evidence for invariance of a measure under translations along a plane."""

    berezin_y_variation: float
    berezin_scale: float
    weyl_commutators: tuple[float, ...]
    invariant: bool


def l_invariance_test(mu, frame: LagrangianFrame, basis: BasisSet,
                      order: int = DEFAULT_ORDER, tol: float = 1e-8,
                      commutator_tol: float = 1e-4, step: float = 0.4) -> InvarianceReport:
    """Two-route invariance check for translations along the frame's plane.

    Route 1: the rotated measure mu_{X*} must have a Berezin transform
    independent of the imaginary part.  Route 2: the assembled Toeplitz
    matrix must commute with Weyl translations W_h for sampled h in L, on
    the interior block.
    """
    x = frame.rotation
    rotated = pushforward(mu, x.conj().T)
    variation_y = 0.0
    scale = 0.0
    for xv in (-0.8, 0.0, 0.6):
        vals = [berezin_measure(rotated, np.full(frame.n, xv) + 1j * np.full(frame.n, yv), order)
                for yv in (-0.9, 0.0, 0.7)]
        variation_y = max(variation_y, float(np.max(np.abs(np.asarray(vals) - vals[0]))))
        scale = max(scale, float(np.max(np.abs(vals))))
    t = assemble_toeplitz(mu, basis, order).entries
    commutators = []
    c = complex_identification(frame.vectors)
    c = c / np.linalg.norm(c, axis=0, keepdims=True)
    for j in range(frame.n):
        h = step * c[:, j]
        w = weyl_matrix(h, basis)
        commutators.append(interior_max_norm(t @ w - w @ t, basis))
    invariant = variation_y <= tol * max(scale, 1e-12) and all(v <= commutator_tol for v in commutators)
    return InvarianceReport(variation_y, scale, tuple(commutators), bool(invariant))


def assemble_l_real_coderivative(mu, k: HalfIndex, frame: LagrangianFrame, basis: BasisSet,
                                 order: int = DEFAULT_ORDER) -> OperatorMatrix:
    """Real coderivative of the rotated measure mu_{X*}; the L-adapted operator."""
    if isinstance(k, (tuple, list)):
        k = HalfIndex.from_doubled(k)
    rotated = pushforward(mu, frame.rotation.conj().T)
    if k.is_zero:
        return assemble_toeplitz(rotated, basis, order)
    return assemble_real_coderivative(rotated, k, basis, order)
