"""Coherence-vector representation of density operators.

A trace-one Hermitian operator on an N-dimensional space is written as

    rho = (1/N) (1 + c n . lam),      c = sqrt(N(N-1)/2),

with ``n`` a real vector of length N^2 - 1.  The scale is chosen so that
pure states sit on the unit sphere: n.n = 1 and, for N >= 3, n * n = n
under the star product

    (a * b)_k = c/(N-2) sum_ij d_ijk a_i b_j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    HermiticityError,
    LayoutError,
    NormalizationError,
    StarUndefinedError,
)
from .su_basis import BasisSet, StructureTensors

EPS_NORM = 1e-9


def coherence_scale(dim: int) -> float:
    """The expansion constant c = sqrt(N(N-1)/2)."""
    return float(np.sqrt(dim * (dim - 1) / 2.0))


@dataclass(frozen=True)
class CoherenceState:
    """A real coherence vector of length dim^2 - 1.

    No positivity or norm constraint is imposed: vectors outside the unit
    ball are legal inputs for positivity scanning.
    """

    dim: int
    n: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.n, dtype=float)
        if vec.shape != (self.dim**2 - 1,):
            raise LayoutError(
                f"coherence vector for dim {self.dim} must have length "
                f"{self.dim**2 - 1}, got shape {vec.shape}"
            )
        vec.setflags(write=False)
        object.__setattr__(self, "n", vec)

    @property
    def norm_squared(self) -> float:
        return float(self.n @ self.n)


def require_hermitian(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Return rho as a complex array, raising unless it is Hermitian.

    The tolerance scales with the largest entry: tol * max(1, |rho|_max).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise LayoutError(f"operator must be a square matrix, got shape {rho.shape}")
    scale = max(1.0, np.abs(rho).max())
    resid = np.abs(rho - rho.conj().T).max()
    if resid > tol * scale:
        raise HermiticityError(f"operator is not Hermitian (residual {resid:.2e})")
    return rho


def to_coherence(rho: np.ndarray, basis: BasisSet, *, herm_tol: float = 1e-10,
                 trace_tol: float = 1e-9) -> CoherenceState:
    """Expand a trace-one Hermitian operator over ``basis``.

    n_i = sqrt(N/(2(N-1))) Tr(rho lam_i); at N = 3 this is the familiar
    (sqrt(3)/2) Tr(rho lam_i).
    """
    rho = require_hermitian(rho, tol=herm_tol)
    if rho.shape[0] != basis.dim:
        raise LayoutError(f"operator dim {rho.shape[0]} != basis dim {basis.dim}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise NormalizationError(f"operator trace {tr:.6g} is not 1")
    N = basis.dim
    overlaps = np.einsum("ab,iba->i", rho, basis.elements)
    n = np.sqrt(N / (2.0 * (N - 1))) * overlaps.real
    return CoherenceState(dim=N, n=n)


def from_coherence(state: CoherenceState, basis: BasisSet) -> np.ndarray:
    """Reconstruct rho = (1/N)(1 + c n.lam); Hermitian and trace one,
    not necessarily positive."""
    if state.dim != basis.dim:
        raise LayoutError(f"state dim {state.dim} != basis dim {basis.dim}")
    N = basis.dim
    mat = np.tensordot(state.n, basis.elements, axes=(0, 0))
    return (np.eye(N, dtype=complex) + coherence_scale(N) * mat) / N


def star(a: np.ndarray, b: np.ndarray, tensors: StructureTensors) -> np.ndarray:
    """Star product (a * b)_k = c/(N-2) d_ijk a_i b_j; symmetric in a, b.

    Undefined at N = 2 where d vanishes identically and the prefactor is
    singular.
    """
    N = tensors.dim
    if N < 3:
        raise StarUndefinedError("star product requires N >= 3 (d = 0 for qubits)")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (N**2 - 1,) or b.shape != (N**2 - 1,):
        raise LayoutError(f"star arguments must have length {N**2 - 1}")
    return coherence_scale(N) / (N - 2) * tensors.d_bilinear(a, b)


def is_pure(state: CoherenceState, tensors: StructureTensors,
            tol: float = EPS_NORM) -> bool:
    """True iff |n.n - 1| <= tol and (for N >= 3) |n*n - n|_inf <= tol.

    For N = 2 only the norm condition applies; the surface of the Bloch
    sphere is exactly the pure states.
    """
    if abs(state.norm_squared - 1.0) > tol:
        return False
    if state.dim == 2:
        return True
    return np.abs(star(state.n, state.n, tensors) - state.n).max() <= tol


def mutual_angle(s1: CoherenceState, s2: CoherenceState) -> float:
    """Angle between two coherence vectors, arccos(n1.n2 / (|n1||n2|)).

    Orthogonal pure states satisfy n1.n2 = -1/(N-1); for qubits that is
    the antipodal angle pi.
    """
    norm1 = np.linalg.norm(s1.n)
    norm2 = np.linalg.norm(s2.n)
    if norm1 == 0.0 or norm2 == 0.0:
        raise DomainError("angle undefined for a zero coherence vector")
    cosang = float(np.clip(s1.n @ s2.n / (norm1 * norm2), -1.0, 1.0))
    return float(np.arccos(cosang))


def orthogonal_states(s1: CoherenceState, s2: CoherenceState,
                      tol: float = EPS_NORM) -> bool:
    """Orthogonality predicate for pure states: n1.n2 = -1/(N-1) within tol."""
    if s1.dim != s2.dim:
        raise LayoutError("states have different dimensions")
    return abs(float(s1.n @ s2.n) + 1.0 / (s1.dim - 1)) <= tol
