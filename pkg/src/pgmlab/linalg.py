"""Dense complex Hermitian matrix toolkit.

Eigendecomposition-backed PSD square roots and pseudo-inverse square roots,
numerical rank, Loewner-order comparisons, Kronecker products, and the
power-mean inequality gap.  All routines take and return plain numpy arrays;
Hermitian inputs are symmetrized via ``(A + A^dag)/2`` when they are within
the hermiticity tolerance and rejected otherwise.

Comparisons use the spectral norm throughout and every verification helper
reports a residual, not just a boolean.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

#: Relative hermiticity tolerance (against the largest entry magnitude).
HERMITICITY_RTOL = 1e-12
#: Default relative eigenvalue cutoff for rank and pseudo-inverse decisions.
EIG_CUTOFF = 1e-10
#: Default Hilbert-space dimension guard for Kronecker products.
DEFAULT_MAX_DIM = 2048


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # orthonormal columns, index-aligned


class PsdFactors(NamedTuple):
    sqrt: np.ndarray
    pinv_sqrt: np.ndarray
    image_proj: np.ndarray


class LoewnerResult(NamedTuple):
    holds: bool
    witness: float  # min eigenvalue of A - B


def opnorm(a: np.ndarray) -> float:
    """Spectral norm; 0.0 for an empty matrix."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def as_hermitian(a: np.ndarray, rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    """Symmetrize ``a`` if it is Hermitian within tolerance, else raise."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(np.abs(a).max(), 1.0) if a.size else 1.0
    dev = np.abs(a - a.conj().T).max() if a.size else 0.0
    if dev > rtol * scale:
        raise ValueError(f"matrix is not Hermitian: |A - A^dag| = {dev:.3e} > {rtol:.1e} * {scale:.3e}")
    return (a + a.conj().T) / 2


def eig_hermitian(a: np.ndarray) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    h = as_hermitian(a)
    vals, vecs = np.linalg.eigh(h)
    return SpectralDecomposition(eigenvalues=vals, eigenvectors=vecs)


def rank_eps(a: np.ndarray, cutoff: float = EIG_CUTOFF) -> int:
    """Number of eigenvalues with ``|lambda| > cutoff * max|lambda|``."""
    vals = eig_hermitian(a).eigenvalues
    if vals.size == 0:
        return 0
    top = np.abs(vals).max()
    if top == 0.0:
        return 0
    return int(np.count_nonzero(np.abs(vals) > cutoff * top))


def psd_sqrt_pinv(a: np.ndarray, cutoff: float = EIG_CUTOFF) -> PsdFactors:
    """Square root, pseudo-inverse square root, and image projector of a PSD
    matrix.

    ``pinv_sqrt`` is the unique positive operator whose square times ``a``
    is the orthogonal projector onto the image of ``a`` (eigenvalues above
    ``cutoff`` relative to the largest one).
    """
    vals, vecs = eig_hermitian(a)
    top = float(vals.max(initial=0.0))
    if vals.size and float(vals.min()) < -EIG_CUTOFF * max(top, 1e-300):
        raise ValueError(f"matrix is not PSD: min eigenvalue {vals.min():.3e}")
    keep = vals > cutoff * max(top, 0.0)
    pos = np.where(keep, vals, 0.0)
    sq = (vecs * np.sqrt(pos)) @ vecs.conj().T
    inv = np.zeros_like(vals)
    inv[keep] = 1.0 / np.sqrt(vals[keep])
    pinv_sq = (vecs * inv) @ vecs.conj().T
    proj = (vecs * keep.astype(float)) @ vecs.conj().T
    return PsdFactors(sqrt=sq, pinv_sqrt=pinv_sq, image_proj=proj)


def kron(a: np.ndarray, b: np.ndarray, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Kronecker product with the package-wide dimension guard."""
    out_dim = a.shape[0] * b.shape[0]
    if out_dim > max_dim:
        raise ValueError(f"kron result dimension {out_dim} exceeds the guard {max_dim}")
    return np.kron(a, b)


def kron_power(a: np.ndarray, k: int, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """``a`` tensored with itself ``k`` times (register-major indexing)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = a
    for _ in range(k - 1):
        out = kron(out, a, max_dim=max_dim)
    return out


def loewner_geq(a: np.ndarray, b: np.ndarray, tol: float = EIG_CUTOFF) -> LoewnerResult:
    """Test ``a >= b`` in the Loewner order; the witness is the smallest
    eigenvalue of ``a - b`` and is reported either way."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    witness = float(eig_hermitian(a - b).eigenvalues[0])
    return LoewnerResult(holds=witness >= -tol, witness=witness)


def power_mean_gap(a: np.ndarray, v: np.ndarray, cutoff: float = EIG_CUTOFF,
                   strict: bool = False) -> float:
    """Gap ``<v|A|v><v|A^-1|v> - ||v||^4`` for PSD ``A``, nonnegative by the
    power-mean inequality.

    ``A^-1`` is taken on the image of ``A``.  Components of ``v`` outside
    the image are projected away; with ``strict=True`` they raise instead.
    """
    vals, vecs = eig_hermitian(a)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape[0] != vals.shape[0]:
        raise ValueError("vector dimension does not match the matrix")
    top = float(vals.max(initial=0.0))
    if vals.size and float(vals.min()) < -EIG_CUTOFF * max(top, 1e-300):
        raise ValueError("matrix is not PSD")
    keep = vals > cutoff * max(top, 0.0)
    coeffs = vecs.conj().T @ v
    weights = np.abs(coeffs) ** 2
    outside = float(weights[~keep].sum())
    total = float(weights.sum())
    if strict and outside > cutoff * max(total, 1e-300):
        raise ValueError(f"vector has weight {outside:.3e} outside the image of A")
    w = weights[keep]
    lam = vals[keep]
    mean_plus = float(w @ lam)
    mean_minus = float(w @ (1.0 / lam)) if lam.size else 0.0
    norm_sq = float(w.sum())
    return mean_plus * mean_minus - norm_sq**2
