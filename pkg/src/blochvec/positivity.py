"""Positive semidefiniteness via characteristic-polynomial coefficients.

The characteristic polynomial of an N x N matrix A is

    det(A - x 1) = x^N - S_1 x^(N-1) + S_2 x^(N-2) - ... + (-1)^N S_N,

with S_k the elementary symmetric polynomials of the eigenvalues,
obtained from the power traces Tr(A^m) by the recursion

    S_k = (1/k) [Tr(A) S_{k-1} - Tr(A^2) S_{k-2} + ... + (-1)^{k-1} Tr(A^k)].

For a Hermitian matrix (real spectrum) A is positive semidefinite exactly
when every S_k >= 0, and the number of sign changes in the coefficient
sequence (1, -S_1, S_2, ...) equals the number of strictly positive
eigenvalues.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .coherence import CoherenceState, coherence_scale, from_coherence, require_hermitian
from .errors import DimensionError, DomainError, LayoutError
from .invariants import trace_power_adjoint
from .su_basis import BasisSet, StructureTensors

EPS_POS = 1e-9


class Verdict(enum.Enum):
    PSD = "PSD"
    NOT_PSD = "NotPSD"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class SymFnSequence:
    """Characteristic-polynomial coefficients S_1..S_N with the verdict."""

    dim: int
    S: np.ndarray
    sign_changes: int
    verdict: Verdict

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        S.setflags(write=False)
        object.__setattr__(self, "S", S)

    @property
    def is_psd(self) -> bool:
        return self.verdict is not Verdict.NOT_PSD


def newton_symmetric_functions(traces) -> np.ndarray:
    """Elementary symmetric functions S_1..S_N from power traces Tr(A^1..A^N)."""
    traces = np.asarray(traces, dtype=float)
    if traces.ndim != 1 or traces.size == 0:
        raise DomainError("need a nonempty vector of power traces")
    N = traces.size
    S = np.empty(N + 1)
    S[0] = 1.0
    for k in range(1, N + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc += (-1.0) ** (j - 1) * traces[j - 1] * S[k - j]
        S[k] = acc / k
    return S[1:]


def matrix_trace_powers(mat: np.ndarray, up_to: int) -> np.ndarray:
    """[Tr(A), Tr(A^2), ..., Tr(A^up_to)] by iterated multiplication."""
    mat = np.asarray(mat, dtype=complex)
    traces = np.empty(up_to)
    power = mat
    for m in range(up_to):
        traces[m] = np.trace(power).real
        if m + 1 < up_to:
            power = power @ mat
    return traces


def symmetric_functions(mat: np.ndarray, *, herm_tol: float = 1e-10) -> np.ndarray:
    """S_1..S_N of a Hermitian matrix (hermiticity is checked and required:
    the sign-change eigenvalue count assumes a real spectrum)."""
    mat = require_hermitian(mat, tol=herm_tol)
    return newton_symmetric_functions(matrix_trace_powers(mat, mat.shape[0]))


def closed_S234(state: CoherenceState, tensors: StructureTensors) -> tuple[float, float, float]:
    """(S_2, S_3, S_4) of a trace-one operator straight from its coherence vector.

    S_2 = (N-1)/(2N) [1 - n.n],
    S_3 = (N-1)(N-2)/(6 N^2) [1 - 3 n.n + 2 (n*n).n],
    S_4 = (N-1)(N-2)(N-3)/(24 N^3) [1 - 6 n.n + 8 (n*n).n
          + 3(N-1)/(N-3) (n.n)^2 - 6(N-2)/(N-3) (n*n).(n*n)].

    Terms are evaluated as raw d-contractions with explicit (N-2), (N-3)
    factors, so S_3 = S_4 = 0 identically at N = 2 and S_4 = 0 at N = 3
    without ever dividing by N - 2 or N - 3.
    """
    if state.dim != tensors.dim:
        raise LayoutError("state and tensors must share one dimension")
    N = state.dim
    c = coherence_scale(N)
    n = state.n
    w = tensors.d_bilinear(n, n)
    p = float(n @ n)
    wn = float(w @ n)
    ww = float(w @ w)
    S2 = (N - 1) / (2.0 * N) * (1.0 - p)
    S3 = (N - 1) / (6.0 * N**2) * ((N - 2) * (1.0 - 3.0 * p) + 2.0 * c * wn)
    S4 = (N - 1) / (24.0 * N**3) * (
        (N - 2) * (N - 3) * (1.0 - 6.0 * p)
        + 8.0 * (N - 3) * c * wn
        + 3.0 * (N - 1) * (N - 2) * p**2
        - 6.0 * c**2 * ww
    )
    return S2, S3, S4


def positivity_verdict(S, *, tol: float | None = None) -> SymFnSequence:
    """Classify a coefficient sequence S_1..S_N computed from a Hermitian matrix.

    A coefficient counts as zero when it is negligible at its own scale:
    |S_k| <= tol * |last non-negligible coefficient| (with S_0 = 1 as the
    anchor and tol defaulting to 1e-9).  The magnitudes of the S_k shrink
    combinatorially with k, so a fixed absolute cutoff would either miss
    honest tiny determinants or keep pure roundoff on degenerate spectra;
    the running band tracks the eigenvalue-counting cutoff at every scale.

    Verdict: NotPSD iff some non-negligible S_k is negative, Boundary when
    PSD but some coefficient is negligible (rank deficiency within
    tolerance), PSD otherwise.  Negligible entries are skipped when
    counting the sign changes of (1, -S_1, S_2, ...), whose number equals
    the count of strictly positive eigenvalues for a real spectrum.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 1 or S.size == 0:
        raise DomainError("need a nonempty coefficient sequence")
    band = EPS_POS if tol is None else tol
    ref = 1.0
    changes = 0
    previous_sign = 1.0  # sign of the leading coefficient
    negative = False
    negligible = False
    for k, value in enumerate(S, start=1):
        if abs(value) <= band * ref:
            negligible = True
            continue
        ref = abs(value)
        negative = negative or value < 0.0
        sign = np.sign(value) * (-1.0) ** k
        if sign != previous_sign:
            changes += 1
        previous_sign = sign
    if negative:
        verdict = Verdict.NOT_PSD
    else:
        verdict = Verdict.BOUNDARY if negligible else Verdict.PSD
    return SymFnSequence(dim=S.size, S=S, sign_changes=changes, verdict=verdict)


def check_positivity(mat: np.ndarray, *, tol: float | None = None,
                     herm_tol: float = 1e-10) -> SymFnSequence:
    """Full gate for a Hermitian matrix: power traces, Newton, verdict."""
    return positivity_verdict(symmetric_functions(mat, herm_tol=herm_tol), tol=tol)


def check_positivity_coherence(state: CoherenceState, tensors: StructureTensors,
                               *, tol: float | None = None) -> SymFnSequence:
    """Positivity gate of the trace-one operator represented by a coherence
    vector, with power traces taken in the adjoint representation."""
    traces = [trace_power_adjoint(state, m, tensors) for m in range(1, state.dim + 1)]
    return positivity_verdict(newton_symmetric_functions(traces), tol=tol)


@dataclass(frozen=True)
class AffineMap:
    """A map of coherence vectors n -> T n + t."""

    dim: int
    T: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        k = self.dim**2 - 1
        T = np.asarray(self.T, dtype=float)
        t = np.asarray(self.t, dtype=float)
        if T.shape != (k, k) or t.shape != (k,):
            raise LayoutError(f"affine map for dim {self.dim} needs a {k}x{k} matrix "
                              f"and a length-{k} vector")
        T.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "t", t)

    @classmethod
    def inversion(cls, dim: int) -> "AffineMap":
        k = dim**2 - 1
        return cls(dim=dim, T=-np.eye(k), t=np.zeros(k))


def apply_affine_map(mapping: AffineMap, state: CoherenceState) -> CoherenceState:
    """n' = T n + t.  No positivity is implied; gate the image separately."""
    if mapping.dim != state.dim:
        raise LayoutError("map and state dimensions differ")
    return CoherenceState(dim=state.dim, n=mapping.T @ state.n + mapping.t)


def universal_inversion(state: CoherenceState, b: float) -> tuple[float, CoherenceState]:
    """The inversion-family image rho -> (1/N)(b 1 - c n.lam).

    Returned as (weight, flipped state) with weight = b, so that the image
    equals weight * from_coherence(flipped).  b = N - 1 reproduces 1 - rho.
    """
    if b <= 0:
        raise DomainError(f"inversion weight must be positive, got {b}")
    return float(b), CoherenceState(dim=state.dim, n=-state.n / b)


def universal_inversion_matrix(state: CoherenceState, b: float,
                               basis: BasisSet) -> np.ndarray:
    """Dense matrix of the inversion-family image (1/N)(b 1 - c n.lam)."""
    weight, flipped = universal_inversion(state, b)
    return weight * from_coherence(flipped, basis)


def diagonal_family_matrix(N: int, a: float) -> np.ndarray:
    """The one-parameter diagonal family (1/N)[1 + a diag(1, ..., 1, -(N-1))].

    Positive semidefinite exactly for -1 <= a <= 1/(N-1).
    """
    diag = np.full(N, 1.0 + a)
    diag[-1] = 1.0 - (N - 1) * a
    return np.diag(diag).astype(complex) / N


def inversion_bound_check(a: float, b: float, N: int, *,
                          tol: float | None = None) -> bool:
    """True iff inverting the diagonal-family state with weight b stays PSD.

    The family member (1/N)[1 + a diag(1, ..., 1, -(N-1))] must itself be a
    state, which restricts a to [-1, 1/(N-1)]; its image under
    rho -> (1/N)(b 1 - c n.lam) is gated through the S_k test.  Closed form
    of the admissible region: b >= max(a, (1-N) a).
    """
    if N < 2:
        raise DimensionError(f"need N >= 2, got {N}")
    if not -1.0 - 1e-12 <= a <= 1.0 / (N - 1) + 1e-12:
        raise DomainError(f"family parameter must satisfy 1/(N-1) >= a >= -1, got {a}")
    diag = np.full(N, b - a)
    diag[-1] = b + (N - 1) * a
    image = np.diag(diag).astype(complex) / N
    return check_positivity(image, tol=tol).is_psd
