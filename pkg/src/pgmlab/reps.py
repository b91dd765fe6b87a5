"""Closed-form irreducible representations and the group Fourier basis.

Supported families: cyclic groups (characters), dihedral groups with odd n
(two 1-dim plus (n-1)/2 two-dim irreps), and affine groups over a prime
(p-1 one-dim characters lifted from the multiplicative quotient plus one
(p-1)-dim irrep realized on the mean-zero functions over F_p).  Other
families raise ``UnsupportedFamilyError`` and callers fall back to
rank-based verification.

Fourier convention: the unitary change of basis has rows indexed by
``(sigma, a, b)`` with entries ``sqrt(d/|G|) * conj(sigma(x)[b, a])``.
With this choice right translation by ``y`` maps to
``kron(sigma(y^-1), 1)`` in each block, so a conjugate density lands on
``(|H|/|G|) * kron(pi, 1)`` with the averaged-subgroup projector ``pi``
carried by the first tensor slot, and left translation maps to
``kron(1, conj(sigma(y)))``.  The orientation was fixed by the numeric
residual checks, not by convention argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .groups import Group, Subgroup, normalizer

TWO_PI_I = 2j * np.pi


class UnsupportedFamilyError(ValueError):
    """No closed-form irrep constructor for this group family."""


@dataclass(frozen=True, eq=False)
class Irrep:
    name: str
    dim: int
    matrices: np.ndarray  # shape (|G|, dim, dim), unitary

    def __call__(self, x: int) -> np.ndarray:
        return self.matrices[x]

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)


@dataclass(frozen=True, eq=False)
class IrrepTable:
    group: Group
    irreps: tuple[Irrep, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(ir.dim for ir in self.irreps)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    raise ValueError(f"no primitive root mod {p}")


def _cyclic_irreps(n: int) -> list[Irrep]:
    omega = np.exp(TWO_PI_I / n)
    out = []
    for j in range(n):
        mats = omega ** (j * np.arange(n))
        out.append(Irrep(name=f"chi{j}", dim=1, matrices=_freeze(mats.reshape(n, 1, 1))))
    return out


def _dihedral_irreps(n: int, order: int) -> list[Irrep]:
    if n % 2 == 0:
        raise UnsupportedFamilyError("dihedral irreps implemented for odd n only")
    a = np.arange(order) % n
    b = np.arange(order) // n
    triv = np.ones(order, dtype=complex)
    sign = np.where(b == 0, 1.0, -1.0).astype(complex)
    out = [
        Irrep("triv", 1, _freeze(triv.reshape(order, 1, 1))),
        Irrep("sgn", 1, _freeze(sign.reshape(order, 1, 1))),
    ]
    omega = np.exp(TWO_PI_I / n)
    for j in range(1, (n - 1) // 2 + 1):
        mats = np.zeros((order, 2, 2), dtype=complex)
        up = omega ** (j * a)
        dn = omega ** (-j * a)
        rot = b == 0
        mats[rot, 0, 0] = up[rot]
        mats[rot, 1, 1] = dn[rot]
        mats[~rot, 0, 1] = up[~rot]
        mats[~rot, 1, 0] = dn[~rot]
        out.append(Irrep(f"2d{j}", 2, _freeze(mats)))
    return out


def _affine_irreps(p: int) -> list[Irrep]:
    order = p * (p - 1)
    a_of = np.arange(order) // p + 1
    b_of = np.arange(order) % p
    gamma = _primitive_root(p)
    # index of each unit in the cyclic group generated by gamma
    dlog = np.zeros(p, dtype=np.int64)
    x = 1
    for e in range(p - 1):
        dlog[x] = e
        x = x * gamma % p
    out = []
    for t in range(p - 1):
        vals = np.exp(TWO_PI_I * t * dlog[a_of] / (p - 1))
        out.append(Irrep(f"chi{t}", 1, _freeze(vals.reshape(order, 1, 1))))
    # (p-1)-dim irrep on mean-zero functions: the map x -> a x + b sends the
    # frequency-k Fourier mode to frequency k/a with a phase from b.
    ainv = np.array([pow(int(a), -1, p) for a in a_of])
    mats = np.zeros((order, p - 1, p - 1), dtype=complex)
    for g in range(order):
        for k in range(1, p):
            m = (k * ainv[g]) % p
            mats[g, m - 1, k - 1] = np.exp(-TWO_PI_I * m * b_of[g] / p)
    out.append(Irrep("std", p - 1, _freeze(mats)))
    return out


def irrep_table(G: Group) -> IrrepTable:
    """Complete irrep table for a supported family."""
    kind, _, rest = G.family.partition(":")
    params = dict(part.split("=") for part in rest.split(";") if "=" in part)
    if kind == "cyclic":
        irreps = _cyclic_irreps(int(params["n"]))
    elif kind == "dihedral":
        irreps = _dihedral_irreps(int(params["n"]), G.order)
    elif kind == "affine":
        irreps = _affine_irreps(int(params["p"]))
    else:
        raise UnsupportedFamilyError(f"no closed-form irreps for family {G.family!r}")
    assert sum(ir.dim**2 for ir in irreps) == G.order
    return IrrepTable(group=G, irreps=tuple(irreps))


def validate_table(table: IrrepTable) -> dict[str, float]:
    """Residuals of the homomorphism, unitarity, character-norm and
    orthogonality properties (exhaustive at desk scale)."""
    G = table.group
    hom = 0.0
    unit = 0.0
    char = 0.0
    for ir in table.irreps:
        mats = ir.matrices
        eye = np.eye(ir.dim)
        unit = max(unit, max(linalg.opnorm(m @ m.conj().T - eye) for m in mats))
        for x in range(G.order):
            prods = mats[x] @ mats  # sigma(x) sigma(y) for all y
            hom = max(hom, float(np.abs(prods - mats[G.mult[x]]).max()))
        chi = ir.character()
        char = max(char, abs(float(np.vdot(chi, chi).real) / G.order - 1.0))
    F = fourier_basis(table)
    schur = linalg.opnorm(F @ F.conj().T - np.eye(G.order))
    return {"homomorphism": hom, "unitarity": unit, "character_norm": char,
            "orthogonality": schur}


def block_slices(table: IrrepTable) -> list[slice]:
    """Row ranges of the Fourier basis, one per irrep (length ``d^2``)."""
    out = []
    start = 0
    for ir in table.irreps:
        out.append(slice(start, start + ir.dim**2))
        start += ir.dim**2
    return out


def fourier_basis(table: IrrepTable) -> np.ndarray:
    """Unitary with rows ``sqrt(d/|G|) * conj(sigma(x)[b, a])`` ordered by
    irrep then ``(a, b)`` row-major."""
    G = table.group
    rows = []
    for ir in table.irreps:
        scale = np.sqrt(ir.dim / G.order)
        # entry over x for row (a, b) is conj(sigma(x)[b, a])
        block = np.conj(np.transpose(ir.matrices, (2, 1, 0)))  # [a, b, x]
        rows.append(scale * block.reshape(ir.dim**2, G.order))
    return np.vstack(rows)


def subgroup_projector(irrep: Irrep, Hg: Subgroup) -> np.ndarray:
    """Averaged subgroup operator ``(1/|H|) sum_{h in Hg} sigma(h)``, an
    orthogonal projector."""
    pi = irrep.matrices[list(Hg.elements)].mean(axis=0)
    return linalg.as_hermitian(pi, rtol=1e-9)


def projector_rank(irrep: Irrep, Hg: Subgroup) -> int:
    """Rank of the averaged subgroup projector (equals its trace)."""
    pi = subgroup_projector(irrep, Hg)
    tr = complex(np.trace(pi)).real
    rank = int(round(tr))
    if abs(tr - rank) > 1e-9 or linalg.opnorm(pi @ pi - pi) > 1e-9:
        raise ValueError(f"subgroup average is not a clean projector (trace {tr})")
    return rank


@dataclass(frozen=True)
class BlockReport:
    """Residuals of a per-irrep block comparison after the Fourier change of
    basis."""

    per_irrep: dict[str, float]
    max_residual: float
    leakage: float  # largest entry outside the diagonal blocks


def _blockwise_compare(op: np.ndarray, table: IrrepTable, expected) -> BlockReport:
    F = fourier_basis(table)
    B = F @ op @ F.conj().T
    residuals = {}
    mask = np.ones_like(B, dtype=bool)
    for ir, sl in zip(table.irreps, block_slices(table)):
        block = B[sl, sl]
        residuals[ir.name] = linalg.opnorm(block - expected(ir))
        mask[sl, sl] = False
    leakage = float(np.abs(B[mask]).max(initial=0.0))
    return BlockReport(per_irrep=residuals, max_residual=max(residuals.values()),
                       leakage=leakage)


def verify_block_structure(rho: np.ndarray, table: IrrepTable, Hg: Subgroup) -> BlockReport:
    """Check that each Fourier block of a conjugate density equals
    ``(|H|/|G|) * kron(pi, 1)``."""
    G = table.group
    weight = len(Hg.elements) / G.order

    def expected(ir: Irrep) -> np.ndarray:
        return weight * np.kron(subgroup_projector(ir, Hg), np.eye(ir.dim))

    return _blockwise_compare(rho, table, expected)


def verify_pgm_blocks(E: np.ndarray, table: IrrepTable, Hg: Subgroup,
                      n_outcomes: int | None = None) -> BlockReport:
    """Check that each Fourier block of a PGM operator equals
    ``d / (l * rk pi) * kron(pi, 1)`` (zero where the projector vanishes).

    ``l`` is the number of measurement outcomes, i.e. the number of distinct
    conjugates; one operator per conjugate carries the normalizer multiplicity.
    """
    G = table.group
    if n_outcomes is None:
        n_outcomes = G.order // normalizer(Hg).order

    def expected(ir: Irrep) -> np.ndarray:
        rank = projector_rank(ir, Hg)
        if rank == 0:
            return np.zeros((ir.dim**2, ir.dim**2))
        pi = subgroup_projector(ir, Hg)
        return ir.dim / (n_outcomes * rank) * np.kron(pi, np.eye(ir.dim))

    return _blockwise_compare(E, table, expected)


def plancherel_SH(table: IrrepTable, H: Subgroup) -> float:
    """Plancherel mass ``sum d^2/|G|`` of the irreps whose averaged subgroup
    projector is nonzero."""
    G = table.group
    return sum(ir.dim**2 for ir in table.irreps if projector_rank(ir, H) > 0) / G.order


def weak_sampling_distribution(table: IrrepTable, H: Subgroup) -> np.ndarray:
    """Probability of observing each irrep when measuring the block name on
    a coset state of ``H``: ``|H| d rk(pi) / |G|``."""
    G = table.group
    probs = np.array([
        len(H.elements) * ir.dim * projector_rank(ir, H) / G.order
        for ir in table.irreps
    ])
    return probs


def gelfand_multiplicity_check(table: IrrepTable, H: Subgroup) -> bool:
    """True iff every irrep's averaged subgroup projector has rank <= 1
    (the multiplicity-free criterion)."""
    return all(projector_rank(ir, H) <= 1 for ir in table.irreps)
