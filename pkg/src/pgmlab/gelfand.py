"""Gel'fand pair detection through the double-coset convolution algebra.

The bi-invariant functions on G form an algebra under convolution spanned
by double-coset indicators.  The pair (G, H) is Gel'fand iff this algebra
is commutative, which is decided here by exact integer convolution counts,
independent of any representation data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import Group, Subgroup, conjugate_family, double_cosets


@dataclass(frozen=True, eq=False)
class HeckeAlgebra:
    """Double-coset blocks of (G, H) and their convolution table.

    ``structure[i, j]`` is the vector over G counting, for each x, the pairs
    ``(a, b)`` with ``a`` in block i, ``b`` in block j and ``ab = x``.
    Convolutions of bi-invariant functions are bi-invariant, so each count
    vector is constant on double cosets; this is verified at construction.
    """

    group: Group
    subgroup: Subgroup
    blocks: tuple[tuple[int, ...], ...]
    structure: np.ndarray  # (n_blocks, n_blocks, |G|) of int64

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.structure, self.structure.transpose(1, 0, 2)))


def _convolve_blocks(G: Group, d1, d2) -> np.ndarray:
    products = G.mult[np.ix_(list(d1), list(d2))]
    return np.bincount(products.ravel(), minlength=G.order).astype(np.int64)


def hecke_algebra(G: Group, H: Subgroup) -> HeckeAlgebra:
    """Compute the double-coset convolution table, verifying bi-invariance."""
    blocks = [tuple(b) for b in double_cosets(H)]
    block_of = np.empty(G.order, dtype=np.int64)
    for i, block in enumerate(blocks):
        block_of[list(block)] = i
    n = len(blocks)
    structure = np.empty((n, n, G.order), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            counts = _convolve_blocks(G, blocks[i], blocks[j])
            structure[i, j] = counts
            for block in blocks:
                vals = counts[list(block)]
                if vals.min() != vals.max():
                    raise AssertionError("convolution is not constant on double cosets")
    structure.setflags(write=False)
    return HeckeAlgebra(group=G, subgroup=H, blocks=tuple(blocks), structure=structure)


def is_gelfand(G: Group, H: Subgroup) -> bool:
    """True iff the double-coset algebra of (G, H) is commutative.

    Exact integer comparison; short-circuits on the first witness pair.
    """
    blocks = [tuple(b) for b in double_cosets(H)]
    convs: dict[tuple[int, int], np.ndarray] = {}
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            lhs = _convolve_blocks(G, blocks[i], blocks[j])
            rhs = _convolve_blocks(G, blocks[j], blocks[i])
            if not np.array_equal(lhs, rhs):
                return False
            convs[(i, j)] = lhs
    return True


def conjugate_stability_check(G: Group, H: Subgroup) -> bool:
    """Gel'fand status agrees across every conjugate of H (it must, since
    the subgroup average conjugates along; this is a self-test)."""
    verdicts = {is_gelfand(G, conj) for conj in conjugate_family(H).conjugates}
    return len(verdicts) == 1
