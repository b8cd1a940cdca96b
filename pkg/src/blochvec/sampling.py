"""Random state and unitary generators for scans and tests."""

from __future__ import annotations

import numpy as np


def _ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(_ginibre(n, rng))
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def haar_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit ket of dimension n."""
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    return psi / np.linalg.norm(psi)


def random_density_matrix(n: int, rng: np.random.Generator,
                          rank: int | None = None) -> np.ndarray:
    """Trace-one PSD matrix G G^dag / Tr(...) with Ginibre G of given rank."""
    g = _ginibre(n, rng)[:, : (rank or n)]
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian_trace_one(n: int, rng: np.random.Generator,
                               spread: float = 1.0) -> np.ndarray:
    """Hermitian matrix with unit trace and generally indefinite spectrum."""
    g = _ginibre(n, rng)
    h = (g + g.conj().T) * (spread / 2.0)
    return h + (1.0 - np.trace(h).real) / n * np.eye(n)
