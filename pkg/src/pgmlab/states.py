"""Coset states, conjugate density matrices, and their prior-weighted mixture.

States live in the group-algebra basis: coordinate ``x`` of C[G] is group
element ``x``, and for ``k`` registers the basis of C[G]^(tensor k) is
indexed register-major (register 1 most significant), matching both
``groups.group_power`` and ``numpy.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .groups import ConjugateFamily, Group, Subgroup, conjugate_family

DEFAULT_MAX_DIM = linalg.DEFAULT_MAX_DIM


@dataclass(frozen=True, eq=False)
class DensityFamily:
    """Indexed family of density matrices to discriminate, with priors.

    For the conjugate promise this is one density per distinct conjugate
    ``H^g`` (each a ``k``-fold Kronecker power of the single-register
    density) with uniform priors ``1/|C(H)|``.  Coarse-grained families
    built by ``pgm.coarse_family`` reuse the same container with mixture
    densities and size-proportional priors.
    """

    group: Group
    registers: int
    densities: tuple[np.ndarray, ...]
    priors: np.ndarray
    labels: tuple[str, ...]
    conjugates: ConjugateFamily | None = None

    @property
    def size(self) -> int:
        return len(self.densities)

    @property
    def dim(self) -> int:
        return self.densities[0].shape[0]


@dataclass(frozen=True, eq=False)
class Mixture:
    """The prior-weighted mixture ``M = sum_i p_i rho_i`` with cached
    spectral factors."""

    operator: np.ndarray
    sqrt: np.ndarray
    pinv_sqrt: np.ndarray
    image_proj: np.ndarray

    @property
    def rank(self) -> int:
        return int(round(float(np.real(np.trace(self.image_proj)))))


def coset_state(G: Group, H: Subgroup, c: int) -> np.ndarray:
    """Unit vector supported uniformly on the left coset ``cH``."""
    if not 0 <= c < G.order:
        raise ValueError(f"coset representative {c} out of range")
    amp = np.zeros(G.order, dtype=complex)
    support = [int(G.mult[c, h]) for h in H.elements]
    amp[support] = 1.0 / np.sqrt(len(support))
    return amp


def left_translation(G: Group, x: int) -> np.ndarray:
    """Permutation matrix of ``y -> x y`` on C[G]."""
    L = np.zeros((G.order, G.order))
    L[G.mult[x, np.arange(G.order)], np.arange(G.order)] = 1.0
    return L


def right_translation(G: Group, x: int) -> np.ndarray:
    """Permutation matrix of ``y -> y x`` on C[G]."""
    R = np.zeros((G.order, G.order))
    R[G.mult[np.arange(G.order), x], np.arange(G.order)] = 1.0
    return R


def conjugate_density(G: Group, Hg: Subgroup) -> np.ndarray:
    """Density matrix of a uniformly random left coset of ``Hg``.

    Averaging the coset-state projectors over all of G collapses to the
    indicator form ``rho[x, y] = [x^-1 y in Hg] / |G|``, i.e. ``1/|G|``
    times the sum of right translations over the subgroup.
    """
    member = np.zeros(G.order, dtype=bool)
    member[list(Hg.elements)] = True
    prod = G.mult[G.inv[:, None], np.arange(G.order)[None, :]]
    return member[prod].astype(complex) / G.order


def density_family(G: Group, H: Subgroup, k: int = 1,
                   max_dim: int = DEFAULT_MAX_DIM) -> DensityFamily:
    """One density per distinct conjugate of ``H``, tensored over ``k``
    registers, with uniform priors.

    The uniform-over-g promise collapses exactly onto distinct conjugates
    because every conjugate has the same number of preimages; success
    probabilities already account for identifying a conjugate rather than
    a group element.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    dim = G.order**k
    if dim > max_dim:
        raise ValueError(f"dimension |G|^{k} = {dim} exceeds the guard {max_dim}")
    fam = conjugate_family(H)
    densities = []
    for conj in fam.conjugates:
        rho = conjugate_density(G, conj)
        densities.append(linalg.kron_power(rho, k, max_dim=max_dim) if k > 1 else rho)
    priors = np.full(fam.size, 1.0 / fam.size)
    priors.setflags(write=False)
    return DensityFamily(
        group=G,
        registers=k,
        densities=tuple(densities),
        priors=priors,
        labels=tuple(str(i) for i in range(fam.size)),
        conjugates=fam,
    )


def mixture(family: DensityFamily) -> Mixture:
    """Build ``M = sum_i p_i rho_i`` and cache its PSD factors."""
    M = np.zeros((family.dim, family.dim), dtype=complex)
    for p, rho in zip(family.priors, family.densities):
        M += p * rho
    M = linalg.as_hermitian(M)
    factors = linalg.psd_sqrt_pinv(M)
    return Mixture(operator=M, sqrt=factors.sqrt, pinv_sqrt=factors.pinv_sqrt,
                   image_proj=factors.image_proj)
