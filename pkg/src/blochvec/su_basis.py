"""Orthogonal traceless Hermitian bases for su(N) and their structure tensors.

Conventions used throughout the package:

* normalization       Tr(lam_i lam_j) = 2 delta_ij
* commutators         [lam_i, lam_j]  = 2i f_ijk lam_k
* anticommutators     {lam_i, lam_j}  = (4/N) delta_ij 1 + 2 d_ijk lam_k

so a product decomposes as

    lam_i lam_j = (2/N) delta_ij 1 + (i f_ijk + d_ijk) lam_k.

``f`` is totally antisymmetric and ``d`` totally symmetric.  With the trace
normalization above the tensors are fixed to

    f_ijk = Tr([lam_i, lam_j] lam_k) / (4i),
    d_ijk = Tr({lam_i, lam_j} lam_k) / 4.

Two basis families are provided: the generalized Gell-Mann matrices for a
single N-level system, grouped as (symmetric off-diagonal, antisymmetric
off-diagonal, diagonal), and scaled tensor products of single-system bases
for composites of qubits and qutrits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import product as iproduct
from typing import Optional

import numpy as np

from .errors import DimensionError, InconsistentBasisError, LayoutError

EPS_HERM = 1e-10
EPS_TENSOR = 1e-12

#: Index of the physics-standard su(3) Gell-Mann matrix lambda_k (k = 1..8)
#: inside the grouped ordering used here.  E.g. standard lambda_3 =
#: diag(1, -1, 0) is element 6 and standard lambda_8 = diag(1, 1, -2)/sqrt(3)
#: is element 7.
SU3_STANDARD_TO_GROUPED = (0, 3, 6, 1, 4, 2, 5, 7)


@dataclass(frozen=True)
class BasisSet:
    """An ordered family of N^2 - 1 traceless Hermitian matrices.

    ``elements`` has shape (N^2 - 1, N, N).  For product bases ``labels``
    records, per element, the tuple of single-subsystem basis indices
    (0 meaning the identity factor) and ``subsystem_dims`` the factor
    dimensions.
    """

    dim: int
    elements: np.ndarray
    labels: Optional[tuple[tuple[int, ...], ...]] = None
    subsystem_dims: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        elems = np.asarray(self.elements, dtype=complex)
        if elems.shape != (self.dim**2 - 1, self.dim, self.dim):
            raise LayoutError(
                f"basis for dim {self.dim} must have shape "
                f"{(self.dim**2 - 1, self.dim, self.dim)}, got {elems.shape}"
            )
        elems.setflags(write=False)
        object.__setattr__(self, "elements", elems)

    def __len__(self):
        return self.elements.shape[0]

    def validate(self, tol: float = EPS_HERM) -> None:
        """Raise :class:`InconsistentBasisError` unless all invariants hold.

        Checks hermiticity, tracelessness and pairwise trace orthogonality
        Tr(lam_i lam_j) = 2 delta_ij, each to ``tol``.
        """
        elems = self.elements
        herm = np.abs(elems - elems.conj().transpose(0, 2, 1)).max()
        if herm > tol:
            raise InconsistentBasisError(f"non-Hermitian basis element (residual {herm:.2e})")
        traces = np.abs(np.einsum("iaa->i", elems)).max()
        if traces > tol:
            raise InconsistentBasisError(f"non-traceless basis element (residual {traces:.2e})")
        gram = np.einsum("iab,jba->ij", elems, elems)
        resid = np.abs(gram - 2.0 * np.eye(len(self))).max()
        if resid > tol:
            raise InconsistentBasisError(f"basis not trace-orthonormal (residual {resid:.2e})")


class StructureTensors:
    """Sparse f (antisymmetric) and d (symmetric) tensors of a basis.

    Entries are stored once per canonical index triple: strictly increasing
    triples for ``f`` (odd permutations flip the sign), non-decreasing
    triples for ``d``.  Dense views are kept for fast contraction; all
    arrays are read-only, instances are safe to share between threads.
    """

    def __init__(self, dim: int, f_dense: np.ndarray, d_dense: np.ndarray,
                 tol: float = EPS_TENSOR):
        k = dim**2 - 1
        if f_dense.shape != (k, k, k) or d_dense.shape != (k, k, k):
            raise LayoutError("structure tensors must be (N^2-1)^3 arrays")
        f_dense = np.where(np.abs(f_dense) <= tol, 0.0, f_dense)
        d_dense = np.where(np.abs(d_dense) <= tol, 0.0, d_dense)
        f_dense.setflags(write=False)
        d_dense.setflags(write=False)
        self.dim = dim
        self.f_dense = f_dense
        self.d_dense = d_dense
        self.f_entries = {
            (i, j, kk): f_dense[i, j, kk]
            for i, j, kk in zip(*np.nonzero(f_dense))
            if i < j < kk
        }
        self.d_entries = {
            (i, j, kk): d_dense[i, j, kk]
            for i, j, kk in zip(*np.nonzero(d_dense))
            if i <= j <= kk
        }

    def d_bilinear(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vector d_ijk a_i b_j (the raw, prefactor-free star product)."""
        return b @ np.tensordot(a, self.d_dense, axes=(0, 0))

    def f_bilinear(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vector f_ijk a_i b_j (antisymmetric in a, b)."""
        return b @ np.tensordot(a, self.f_dense, axes=(0, 0))


def _gellmann_elements(dim: int) -> np.ndarray:
    mats = []
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            mats.append(m)
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            mats.append(m)
    for m_ in range(1, dim):
        diag = np.zeros(dim)
        diag[:m_] = 1.0
        diag[m_] = -float(m_)
        mats.append(np.sqrt(2.0 / (m_ * (m_ + 1))) * np.diag(diag).astype(complex))
    return np.array(mats)


@lru_cache(maxsize=None)
def build_gellmann_basis(dim: int) -> BasisSet:
    """Generalized Gell-Mann basis of su(dim), normalized to Tr(lam^2) = 2.

    Ordering: the dim(dim-1)/2 symmetric off-diagonal matrices (by row then
    column), the antisymmetric ones likewise, then the dim - 1 diagonal
    matrices sqrt(2/(m(m+1))) diag(1, ..., 1, -m, 0, ...).  For dim = 2 this
    is the Pauli basis (x, y, z); for dim = 3, :data:`SU3_STANDARD_TO_GROUPED`
    maps the physics-standard lambda_1..lambda_8 numbering onto this order.
    """
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise DimensionError(f"basis dimension must be an integer >= 2, got {dim!r}")
    return BasisSet(dim=int(dim), elements=_gellmann_elements(int(dim)))


def product_basis_labels(dims: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Ordered labels (i_1, ..., i_k) of a product basis, identity = 0.

    Labels are grouped by which subsystems carry a non-identity factor
    (single-subsystem groups first, then pairs, ...), lexicographic within
    a group.  For two qubits this yields x1, y1, z1, 1x, 1y, 1z, xx, xy,
    xz, yx, ..., zz.
    """
    ranges = [range(d * d) for d in dims]
    labels = [lab for lab in iproduct(*ranges) if any(lab)]

    def key(lab):
        support = tuple(i for i, v in enumerate(lab) if v)
        return (len(support), support, lab)

    return tuple(sorted(labels, key=key))


def build_product_basis(dims) -> BasisSet:
    """Scaled tensor-product basis for a composite of qubits and qutrits.

    Elements are {lam_{i_1} x ... x lam_{i_k}} over the single-subsystem
    Gell-Mann bases (identity allowed per factor, the all-identity label
    excluded), each rescaled so that Tr(lam_i lam_j) = 2 delta_ij.  For two
    qubits each element carries a 1/sqrt(2) and the ordering matches
    :func:`product_basis_labels`.
    """
    if len(dims) == 0:
        raise LayoutError("subsystem dimension list must not be empty")
    return _build_product_basis(tuple(int(d) for d in dims))


@lru_cache(maxsize=None)
def _build_product_basis(dims: tuple[int, ...]) -> BasisSet:
    for d in dims:
        if d < 2:
            raise DimensionError(f"subsystem dimensions must be >= 2, got {d}")
        if d > 3:
            raise DimensionError(f"product bases support qubit/qutrit factors only, got {d}")
    total = int(np.prod(dims))
    factors = {d: build_gellmann_basis(d).elements for d in set(dims)}
    labels = product_basis_labels(dims)
    mats = []
    for lab in labels:
        parts = [
            np.eye(d, dtype=complex) if i == 0 else factors[d][i - 1]
            for d, i in zip(dims, lab)
        ]
        mat = reduce(np.kron, parts)
        # Tr(element^2): 2 per non-identity factor, d per identity factor.
        norm2 = np.prod([2.0 if i else float(d) for d, i in zip(dims, lab)])
        mats.append(mat * np.sqrt(2.0 / norm2))
    return BasisSet(dim=total, elements=np.array(mats), labels=labels,
                    subsystem_dims=dims)


def structure_constants(basis: BasisSet, tol: float = EPS_TENSOR) -> StructureTensors:
    """Compute the f and d tensors of ``basis`` from traces.

    f_ijk = Tr([lam_i, lam_j] lam_k) / (4i) and
    d_ijk = Tr({lam_i, lam_j} lam_k) / 4; the 1/4 normalization is forced by
    the commutation relations together with Tr(lam_i lam_j) = 2 delta_ij.
    Entries below ``tol`` are dropped.
    """
    basis.validate()
    elems = basis.elements
    prod = np.einsum("iab,jbc->ijac", elems, elems)
    comm = prod - prod.transpose(1, 0, 2, 3)
    anti = prod + prod.transpose(1, 0, 2, 3)
    f = np.einsum("ijab,kba->ijk", comm, elems) / 4j
    d = np.einsum("ijab,kba->ijk", anti, elems) / 4.0
    f_imag = np.abs(f.imag).max()
    d_imag = np.abs(d.imag).max()
    if max(f_imag, d_imag) > tol:
        raise InconsistentBasisError(
            f"structure constants have imaginary residue {max(f_imag, d_imag):.2e}"
        )
    return StructureTensors(basis.dim, np.ascontiguousarray(f.real),
                            np.ascontiguousarray(d.real), tol=tol)


@lru_cache(maxsize=None)
def gellmann_tensors(dim: int) -> StructureTensors:
    """Cached structure tensors of the grouped Gell-Mann basis."""
    return structure_constants(build_gellmann_basis(dim))


def product_tensors(dims) -> StructureTensors:
    """Cached structure tensors of the product basis for ``dims``."""
    return _product_tensors(tuple(int(d) for d in dims))


@lru_cache(maxsize=None)
def _product_tensors(dims: tuple[int, ...]) -> StructureTensors:
    return structure_constants(build_product_basis(dims))


def basis_to_json(basis: BasisSet) -> dict:
    """Serialize a basis as {"dim": N, "elements": [[[re, im], ...], ...]}."""
    elements = [
        [[[float(z.real), float(z.imag)] for z in row] for row in mat]
        for mat in basis.elements
    ]
    doc = {"dim": basis.dim, "elements": elements}
    if basis.labels is not None:
        doc["labels"] = [list(lab) for lab in basis.labels]
        doc["subsystem_dims"] = list(basis.subsystem_dims)
    return doc


def basis_from_json(doc: dict) -> BasisSet:
    """Inverse of :func:`basis_to_json`."""
    elems = np.array(
        [[[complex(re, im) for re, im in row] for row in mat] for mat in doc["elements"]]
    )
    labels = doc.get("labels")
    return BasisSet(
        dim=int(doc["dim"]),
        elements=elems,
        labels=tuple(tuple(lab) for lab in labels) if labels is not None else None,
        subsystem_dims=tuple(doc["subsystem_dims"]) if "subsystem_dims" in doc else None,
    )
