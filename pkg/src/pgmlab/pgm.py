"""The pretty good measurement and its optimality certificates.

Builds the PGM ``E_i = p_i M^-1/2 rho_i M^-1/2`` for a density family,
completes it to a POVM with a residual projector when the mixture is rank
deficient, and verifies the three measurement-optimality conditions
(the Holevo / Yuen-Kennedy-Max characterization):

    (sum_j p_j rho_j E_j - p_i rho_i) E_i = 0        for every i,
    sum_j p_j rho_j E_j Hermitian,
    sum_j p_j rho_j E_j >= p_i rho_i                 for every i.

The residual outcome participates as a zero-prior member of the index set.
Residual norms are spectral norms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .states import DensityFamily, Mixture, mixture

#: Base tolerances for the optimality conditions (scaled by sqrt(dim)).
BASE_TOL_SINGLE = 1e-8
BASE_TOL_MULTI = 1e-7


@dataclass(frozen=True, eq=False)
class POVM:
    """Labelled measurement operators, optionally completed by a residual."""

    operators: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    residual: np.ndarray | None = None

    @property
    def size(self) -> int:
        return len(self.operators)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def completeness_residual(self) -> float:
        """Spectral norm of ``sum_i E_i + M0 - 1``."""
        total = sum(self.operators) + (self.residual if self.residual is not None else 0)
        return linalg.opnorm(total - np.eye(self.dim))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue across all operators (PSD check witness)."""
        lows = [float(linalg.eig_hermitian(E).eigenvalues[0]) for E in self.operators]
        if self.residual is not None:
            lows.append(float(linalg.eig_hermitian(self.residual).eigenvalues[0]))
        return min(lows)


@dataclass(frozen=True)
class OptimalityReport:
    """Residuals of the three optimality conditions at a stated tolerance."""

    eq4_residual: float   # max_i ||(sum_j p_j rho_j E_j - p_i rho_i) E_i||
    eq5_residual: float   # ||sum_j p_j rho_j E_j - sum_j p_j E_j rho_j||
    eq6_witness: float    # min_i lambda_min(sum_j p_j rho_j E_j - p_i rho_i)
    tol: float
    passed: bool


def default_optimality_tol(family: DensityFamily) -> float:
    """Condition tolerance: 1e-8 (one register) or 1e-7 (several), scaled by
    sqrt(dim) for eigensolver error growth."""
    base = BASE_TOL_SINGLE if family.registers == 1 else BASE_TOL_MULTI
    return base * np.sqrt(family.dim)


def build_pgm(family: DensityFamily, mix: Mixture | None = None) -> POVM:
    """Pretty good measurement for a density family.

    The residual ``1 - Pi`` (complement of the image of the mixture) is
    attached whenever the mixture is rank deficient; observing it means the
    promise was violated, e.g. the hidden subgroup was trivial.
    """
    mix = mix if mix is not None else mixture(family)
    root = mix.pinv_sqrt
    ops = []
    for p, rho in zip(family.priors, family.densities):
        ops.append(linalg.as_hermitian(p * (root @ rho @ root), rtol=1e-9))
    residual = np.eye(family.dim) - mix.image_proj
    if linalg.opnorm(residual) < 1e-12:
        residual = None
    else:
        residual = linalg.as_hermitian(residual)
    return POVM(operators=tuple(ops), labels=family.labels, residual=residual)


def uniform_guess_povm(family: DensityFamily) -> POVM:
    """The guess-at-random POVM ``E_i = (1/l) 1`` (negative control)."""
    eye = np.eye(family.dim, dtype=complex)
    ops = tuple(eye / family.size for _ in range(family.size))
    return POVM(operators=ops, labels=family.labels, residual=None)


def _check_compatible(povm: POVM, family: DensityFamily) -> None:
    if povm.size != family.size:
        raise ValueError(f"POVM has {povm.size} outcomes but family has {family.size}")
    if povm.dim != family.dim:
        raise ValueError(f"dimension mismatch: POVM {povm.dim}, family {family.dim}")
    if povm.labels != family.labels:
        raise ValueError("POVM labels do not match family labels")


def success_probability(povm: POVM, family: DensityFamily) -> float:
    """``sum_i p_i tr(E_i rho_i)``."""
    _check_compatible(povm, family)
    total = 0.0
    for p, E, rho in zip(family.priors, povm.operators, family.densities):
        term = complex(np.trace(E @ rho))
        total += p * term.real
    return total


def confusion_matrix(povm: POVM, family: DensityFamily) -> np.ndarray:
    """Matrix ``C[i, j] = tr(E_i rho_j)`` (rows: outcomes, columns: states)."""
    _check_compatible(povm, family)
    out = np.empty((povm.size, family.size))
    for i, E in enumerate(povm.operators):
        for j, rho in enumerate(family.densities):
            out[i, j] = complex(np.trace(E @ rho)).real
    return out


def verify_optimality(povm: POVM, family: DensityFamily,
                      tol: float | None = None) -> OptimalityReport:
    """Evaluate the three optimality conditions for ``povm`` against
    ``family``; reports residuals and never raises on failure.

    The residual operator is included as an outcome with prior zero, so the
    conditions quantify over the complete POVM.
    """
    _check_compatible(povm, family)
    if tol is None:
        tol = default_optimality_tol(family)
    T = np.zeros((family.dim, family.dim), dtype=complex)
    for p, E, rho in zip(family.priors, povm.operators, family.densities):
        T += p * (rho @ E)
    eq5 = linalg.opnorm(T - T.conj().T)
    T_h = (T + T.conj().T) / 2

    members = list(zip(family.priors, family.densities, povm.operators))
    if povm.residual is not None:
        members.append((0.0, np.zeros_like(T), povm.residual))
    eq4 = 0.0
    eq6 = np.inf
    for p, rho, E in members:
        gap = T - p * rho
        eq4 = max(eq4, linalg.opnorm(gap @ E))
        low = float(np.linalg.eigvalsh(T_h - p * rho)[0])
        eq6 = min(eq6, low)
    passed = (eq4 <= tol) and (eq5 <= tol) and (eq6 >= -tol)
    return OptimalityReport(eq4_residual=float(eq4), eq5_residual=float(eq5),
                            eq6_witness=float(eq6), tol=float(tol), passed=passed)


# ---------------------------------------------------------------------------
# partial measurements (coarse graining)


def _validate_partition(partition, size: int) -> list[list[int]]:
    blocks = [[int(i) for i in block] for block in partition]
    flat = sorted(i for block in blocks for i in block)
    if flat != list(range(size)):
        raise ValueError("partition must cover all outcome indices exactly once")
    if any(not block for block in blocks):
        raise ValueError("partition blocks must be nonempty")
    return blocks


def coarse_grain(povm: POVM, partition) -> POVM:
    """Sum POVM operators over partition blocks; the residual is unchanged.

    Together with ``coarse_family`` this realizes partial measurements: the
    block operators form the PGM of the block-mixture family with priors
    proportional to block sizes, and inherit its optimality.
    """
    blocks = _validate_partition(partition, povm.size)
    ops = []
    labels = []
    for j, block in enumerate(blocks):
        ops.append(linalg.as_hermitian(sum(povm.operators[i] for i in block)))
        labels.append("+".join(povm.labels[i] for i in block))
    return POVM(operators=tuple(ops), labels=tuple(labels), residual=povm.residual)


def coarse_family(family: DensityFamily, partition) -> DensityFamily:
    """Block mixtures ``rho_B = (1/|B|) sum_{i in B} rho_i`` with priors
    ``|B| / l``."""
    blocks = _validate_partition(partition, family.size)
    densities = []
    priors = []
    labels = []
    for block in blocks:
        densities.append(sum(family.densities[i] for i in block) / len(block))
        priors.append(len(block) / family.size)
        labels.append("+".join(family.labels[i] for i in block))
    priors_arr = np.array(priors)
    priors_arr.setflags(write=False)
    return DensityFamily(group=family.group, registers=family.registers,
                         densities=tuple(densities), priors=priors_arr,
                         labels=tuple(labels), conjugates=None)


# ---------------------------------------------------------------------------
# scaled-projector capacity bound


@dataclass(frozen=True)
class CapacityBlock:
    """Scaled-projector diagnosis of one invariant block."""

    dim: int
    ranks: tuple[int, ...]
    alphas: tuple[float, ...]
    structure_residual: float
    completeness_residual: float
    structure_ok: bool
    mean_success: float
    bound: float
    holds: bool


@dataclass(frozen=True)
class CapacityReport:
    blocks: tuple[CapacityBlock, ...]
    structure_ok: bool
    holds: bool


def mixture_eigenblocks(mix: Mixture, cluster_rtol: float = 1e-8) -> list[np.ndarray]:
    """Orthonormal bases of the nonzero eigenspaces of the mixture, one per
    clustered eigenvalue.

    Measuring which eigenspace the state falls in is weak Fourier sampling in
    disguise: for conjugate families the eigenspaces of M are unions of
    Fourier blocks sharing an eigenvalue, which is what the capacity bound
    needs.
    """
    vals, vecs = linalg.eig_hermitian(mix.operator)
    top = float(np.abs(vals).max(initial=0.0))
    if top == 0.0:
        return []
    blocks = []
    start = 0
    order = np.argsort(vals)
    vals = vals[order]
    vecs = vecs[:, order]
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > cluster_rtol * top:
            if vals[start] > linalg.EIG_CUTOFF * top:
                blocks.append(vecs[:, start:i])
            start = i
    return blocks


def capacity_check(povm: POVM, family: DensityFamily, blocks=None,
                   tol: float = 1e-8) -> CapacityReport:
    """Check the scaled-projector capacity bound on each invariant block.

    Within a block of dimension D where every outcome operator is a scalar
    multiple of a rank-``r`` projector and the block operators sum to the
    identity, the mean success over ``l`` equiprobable (block-normalized)
    states is at most ``D / (r l)``.  ``blocks`` is a list of orthonormal
    column bases; ``None`` means one global block (the whole space).
    Structure failures are reported, never raised.
    """
    _check_compatible(povm, family)
    if blocks is None:
        blocks = [np.eye(povm.dim, dtype=complex)]
    out_blocks = []
    for V in blocks:
        D = V.shape[1]
        ranks = []
        alphas = []
        structure_res = 0.0
        total = np.zeros((D, D), dtype=complex)
        for E in povm.operators:
            Eb = linalg.as_hermitian(V.conj().T @ E @ V, rtol=1e-9)
            total += Eb
            vals = np.linalg.eigvalsh(Eb)
            alpha = float(vals.max(initial=0.0))
            if alpha <= tol:
                ranks.append(0)
                alphas.append(0.0)
                structure_res = max(structure_res, float(np.abs(vals).max(initial=0.0)))
                continue
            rank = int(np.count_nonzero(vals > alpha / 2))
            dev = float(np.minimum(np.abs(vals), np.abs(vals - alpha)).max())
            ranks.append(rank)
            alphas.append(alpha)
            structure_res = max(structure_res, dev)
        completeness = linalg.opnorm(total - np.eye(D))
        positive = [r for r in ranks if r > 0]
        structure_ok = (
            structure_res <= tol
            and completeness <= max(tol, 1e-9 * np.sqrt(D))
            and len(set(positive)) == 1
            and len(positive) == len(ranks)
        )
        r = positive[0] if len(set(positive)) == 1 and positive else 0
        mean = 0.0
        usable = 0
        for E, rho in zip(povm.operators, family.densities):
            rho_b = V.conj().T @ rho @ V
            w = complex(np.trace(rho_b)).real
            if w <= 1e-14:
                continue
            E_b = V.conj().T @ E @ V
            mean += complex(np.trace(E_b @ rho_b)).real / w
            usable += 1
        mean = mean / usable if usable else 0.0
        bound = D / (r * povm.size) if r else np.inf
        out_blocks.append(CapacityBlock(
            dim=D, ranks=tuple(ranks), alphas=tuple(alphas),
            structure_residual=float(structure_res),
            completeness_residual=float(completeness),
            structure_ok=bool(structure_ok),
            mean_success=float(mean), bound=float(bound),
            holds=bool(mean <= bound + tol),
        ))
    return CapacityReport(
        blocks=tuple(out_blocks),
        structure_ok=all(b.structure_ok for b in out_blocks),
        holds=all(b.holds for b in out_blocks),
    )
