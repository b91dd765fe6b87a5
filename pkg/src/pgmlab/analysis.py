"""Closed-form success probabilities and bounds for the conjugate promise.

The single-register optimum is ``(|H|/|C(H)|) * Planch(S_H)`` where
``Planch(S_H)`` is the Plancherel mass of the irreps surviving the subgroup
average; it is bounded by ``|H| / (|C(H)| |core|)`` with the normal core of
H.  For Gel'fand pairs the k-register optimum is bounded by
``(|H|^k/|C(H)|) * Planch(S_H)^k <= (1/|C(H)|) (|H|/|core|)^k``.

``Planch(S_H)`` has two computation paths: the rank of the mixture divided
by |G| (works for every group) and the irrep table (closed-form families
only); predictions record which was used and the agreement where both exist.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import reps
from .gelfand import is_gelfand
from .groups import Group, Subgroup, conjugate_family, is_prime, normal_core
from .linalg import rank_eps
from .states import density_family, mixture


class MultiregisterBound(NamedTuple):
    planch_form: float  # (|H|^k/|C(H)|) * Planch(S_H)^k
    core_form: float    # (1/|C(H)|) * (|H|/|core|)^k


@dataclass(frozen=True)
class Prediction:
    """Closed-form outputs for one (G, H) pair."""

    subgroup_order: int
    n_conjugates: int
    core_order: int
    planch_SH: float
    planch_source: str           # "rank-of-M" or "irrep-table"
    planch_irrep: float | None   # irrep-table value when available
    p_success: float
    core_bound: float
    multiregister_bounds: dict[int, MultiregisterBound]


def planch_from_rank(G: Group, H: Subgroup) -> float:
    """``Planch(S_H)`` as rank(M)/|G|: the mixture is supported exactly on
    the blocks of the surviving irreps, each of dimension d^2."""
    fam = density_family(G, H, 1)
    return rank_eps(mixture(fam).operator) / G.order


def planch_from_irreps(G: Group, H: Subgroup) -> float | None:
    """Irrep-table Plancherel mass, or None for unsupported families."""
    try:
        table = reps.irrep_table(G)
    except reps.UnsupportedFamilyError:
        return None
    return reps.plancherel_SH(table, H)


def predicted_success_single(G: Group, H: Subgroup) -> float:
    """Optimal single-register success probability for a uniformly random
    conjugate of H: ``(|H|/|C(H)|) * Planch(S_H)``."""
    ell = conjugate_family(H).size
    return H.order / ell * planch_from_rank(G, H)


def core_bound_single(G: Group, H: Subgroup) -> float:
    """Upper bound ``|H| / (|C(H)| * |core|)``."""
    ell = conjugate_family(H).size
    return H.order / (ell * normal_core(H).order)


def dihedral_closed_form(n: int) -> float:
    """Single-register success for the order-2 reflection promise in the
    dihedral group of order 2n (odd n): ``(2/n)(1 - 1/(2n))``."""
    if n < 3 or n % 2 == 0:
        raise ValueError("dihedral closed form is defined for odd n >= 3")
    return float(Fraction(2, n) * (1 - Fraction(1, 2 * n)))


def affine_closed_form(p: int) -> float:
    """Single-register success for the stabilizer promise in the affine
    group over F_p: ``1 - 2(p-1)/p^2``."""
    if not is_prime(p) or p < 3:
        raise ValueError("affine closed form needs a prime p >= 3")
    return float(1 - Fraction(2 * (p - 1), p * p))


def multiregister_bound(G: Group, H: Subgroup, k: int,
                        planch: float | None = None,
                        gelfand: bool | None = None) -> MultiregisterBound:
    """Both forms of the k-register bound; the Plancherel form is the
    sharper one.  Proven for Gel'fand pairs, so a non-Gel'fand input warns.

    ``gelfand`` short-circuits the pair test when the caller already knows it.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if gelfand is None:
        gelfand = is_gelfand(G, H)
    if not gelfand and k > 1:
        warnings.warn("multiregister bound is proven for Gel'fand pairs only",
                      stacklevel=2)
    ell = conjugate_family(H).size
    core = normal_core(H).order
    if planch is None:
        planch = planch_from_rank(G, H)
    planch_form = H.order**k / ell * planch**k
    core_form = (H.order / core) ** k / ell
    return MultiregisterBound(planch_form=float(planch_form), core_form=float(core_form))


def predict(G: Group, H: Subgroup, ks=(1,)) -> Prediction:
    """Assemble every closed-form quantity for (G, H), recording which
    Plancherel path was used."""
    ell = conjugate_family(H).size
    core = normal_core(H).order
    planch_rank = planch_from_rank(G, H)
    planch_irrep = planch_from_irreps(G, H)
    p_success = H.order / ell * planch_rank
    pair_is_gelfand = is_gelfand(G, H)
    bounds = {
        k: multiregister_bound(G, H, k, planch=planch_rank, gelfand=pair_is_gelfand)
        for k in ks
    }
    return Prediction(
        subgroup_order=H.order,
        n_conjugates=ell,
        core_order=core,
        planch_SH=planch_rank,
        planch_source="rank-of-M",
        planch_irrep=planch_irrep,
        p_success=p_success,
        core_bound=H.order / (ell * core),
        multiregister_bounds=bounds,
    )
