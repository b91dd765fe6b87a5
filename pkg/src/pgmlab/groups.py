"""Finite groups as dense Cayley tables.

Elements are integers ``0..order-1`` with the identity fixed at index 0.
``mult[a, b]`` is the product ``a*b``; for permutation families the product
is function composition, apply ``b`` first.  Conjugation follows the
convention ``h^g = g^-1 h g``.

Constructors cover the families used throughout the package (cyclic,
dihedral, symmetric, affine over a prime, Heisenberg over a prime) plus
user-supplied tables loaded from JSON.  Everything is immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

#: Largest Hilbert-space dimension the dense pipeline will build by default.
DEFAULT_MAX_ORDER = 2048

_EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 256
_ASSOCIATIVITY_SAMPLES = 100_000


class GroupSpecError(ValueError):
    """Malformed group/subgroup spec string or invalid table data."""


class DimensionGuardError(ValueError):
    """A construction would exceed the configured dimension guard."""


@dataclass(frozen=True, eq=False)
class Group:
    """A finite group given by its multiplication table.

    Attributes:
        order: number of elements.
        mult: ``order x order`` table of element indices, ``mult[a, b] = a*b``.
        inv: ``inv[a]`` is the index of ``a^-1``.
        labels: human-readable element names, index-aligned.
        family: canonical spec string of the constructor, e.g. ``dihedral:n=5``.
    """

    order: int
    mult: np.ndarray
    inv: np.ndarray
    labels: tuple[str, ...]
    family: str

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def conj(self, h: int, g: int) -> int:
        """Return ``g^-1 h g``."""
        return int(self.mult[self.mult[self.inv[g], h], g])

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"Group({self.family!r}, order={self.order})"


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A closed subset of a parent group, stored as sorted element indices."""

    parent: Group
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def as_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"Subgroup(order={self.order} of {self.parent.family!r})"


@dataclass(frozen=True, eq=False)
class ConjugateFamily:
    """All distinct conjugates ``H^g`` of a subgroup, canonically ordered.

    The canonical order is lexicographic on the sorted element-index tuples,
    so family indexing is reproducible across runs.  ``reps[i]`` is one group
    element conjugating ``H`` onto conjugate ``i`` (the smallest such index),
    and ``coset_map[g]`` is the index of ``H^g`` in ``conjugates``.
    """

    subgroup: Subgroup
    conjugates: tuple[Subgroup, ...]
    reps: tuple[int, ...]
    coset_map: np.ndarray

    @property
    def size(self) -> int:
        return len(self.conjugates)


# ---------------------------------------------------------------------------
# construction and validation


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _validate_table_basics(mult: np.ndarray) -> np.ndarray:
    """Latin-square, identity-at-0 and inverse checks; returns the inv table."""
    n = mult.shape[0]
    if mult.shape != (n, n):
        raise GroupSpecError(f"multiplication table must be square, got {mult.shape}")
    if mult.min() < 0 or mult.max() >= n:
        raise GroupSpecError("table entries out of range")
    full = np.arange(n)
    for axis, what in ((1, "row"), (0, "column")):
        sorted_lines = np.sort(mult, axis=axis)
        if not np.array_equal(sorted_lines, np.broadcast_to(full if axis == 1 else full[:, None], mult.shape)):
            raise GroupSpecError(f"table is not a Latin square (bad {what})")
    if not np.array_equal(mult[0], full) or not np.array_equal(mult[:, 0], full):
        raise GroupSpecError("identity must sit at index 0")
    inv = np.empty(n, dtype=mult.dtype)
    rows, cols = np.nonzero(mult == 0)
    inv[rows] = cols
    if np.any(mult[full, inv] != 0) or np.any(mult[inv, full] != 0):
        raise GroupSpecError("inverses are not two-sided")
    return inv


def _check_associativity(mult: np.ndarray, rng_seed: int = 0) -> None:
    n = mult.shape[0]
    if n <= _EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
        for a in range(n):
            # (a*b)*c vs a*(b*c), all b, c at once
            if not np.array_equal(mult[mult[a], :], mult[a][mult]):
                raise GroupSpecError(f"associativity fails at a={a}")
    else:
        rng = np.random.default_rng(rng_seed)
        a = rng.integers(0, n, _ASSOCIATIVITY_SAMPLES)
        b = rng.integers(0, n, _ASSOCIATIVITY_SAMPLES)
        c = rng.integers(0, n, _ASSOCIATIVITY_SAMPLES)
        if not np.array_equal(mult[mult[a, b], c], mult[a, mult[b, c]]):
            raise GroupSpecError("associativity fails on sampled triples")


def _build_group(mult: np.ndarray, labels: list[str], family: str, *, trusted: bool) -> Group:
    mult = np.ascontiguousarray(mult, dtype=np.int64)
    inv = _validate_table_basics(mult)
    if not trusted:
        _check_associativity(mult)
    if len(labels) != mult.shape[0]:
        raise GroupSpecError("labels length does not match order")
    return Group(
        order=mult.shape[0],
        mult=_freeze(mult),
        inv=_freeze(inv),
        labels=tuple(labels),
        family=family,
    )


def group_from_table(mult, labels=None, family: str = "custom") -> Group:
    """Build a group from a user-supplied table, fully validated.

    Associativity is checked exhaustively up to order 256 and on 10^5
    seeded random triples above that.
    """
    mult = np.asarray(mult, dtype=np.int64)
    n = mult.shape[0] if mult.ndim == 2 else 0
    if labels is None:
        labels = [str(i) for i in range(n)]
    return _build_group(mult, list(labels), family, trusted=False)


def load_group_json(source) -> Group:
    """Load ``{"order": N, "mult": [[...]], "labels": [...]?}`` from a path or dict."""
    if isinstance(source, (str, Path)):
        data = json.loads(Path(source).read_text(encoding="utf-8"))
        family = f"json:{Path(source).name}"
    else:
        data = source
        family = "json:inline"
    mult = np.asarray(data["mult"], dtype=np.int64)
    if int(data.get("order", mult.shape[0])) != mult.shape[0]:
        raise GroupSpecError("declared order does not match table size")
    return group_from_table(mult, data.get("labels"), family=family)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def cyclic_group(n: int) -> Group:
    if n < 1:
        raise GroupSpecError("cyclic group needs n >= 1")
    idx = np.arange(n)
    mult = (idx[:, None] + idx[None, :]) % n
    return _build_group(mult, [str(k) for k in range(n)], f"cyclic:n={n}", trusted=True)


def dihedral_group(n: int) -> Group:
    """Dihedral group of order 2n: rotations first (indices 0..n-1), then
    reflections (index n+a is ``r^a s``)."""
    if n < 2:
        raise GroupSpecError("dihedral group needs n >= 2")
    order = 2 * n
    mult = np.empty((order, order), dtype=np.int64)
    for i in range(order):
        a, b = i % n, i // n
        for j in range(order):
            c, d = j % n, j // n
            # (r^a s^b)(r^c s^d) = r^{a + (-1)^b c} s^{b+d}
            e = (a - c) % n if b else (a + c) % n
            mult[i, j] = e + n * ((b + d) % 2)
    labels = [f"r{a}" for a in range(n)] + [f"r{a}s" for a in range(n)]
    return _build_group(mult, labels, f"dihedral:n={n}", trusted=True)


def _perm_list(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n)))


def symmetric_group(n: int, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """Symmetric group on ``{0..n-1}`` in lexicographic one-line order.

    Index 0 is the identity (the lexicographically first permutation).
    ``mult[i, j]`` composes with ``j`` applied first.
    """
    if n < 1:
        raise GroupSpecError("symmetric group needs n >= 1")
    perms = _perm_list(n)
    order = len(perms)
    if order > max_order:
        raise DimensionGuardError(f"|S_{n}| = {order} exceeds the guard {max_order}")
    index = {p: i for i, p in enumerate(perms)}
    mult = np.empty((order, order), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mult[i, j] = index[tuple(p[q[x]] for x in range(n))]
    labels = ["".join(map(str, p)) for p in perms]
    return _build_group(mult, labels, f"symmetric:n={n}", trusted=True)


def affine_group(p: int) -> Group:
    """Affine group of the line over F_p: maps ``x -> a x + b`` with a != 0.

    Element ``(a, b)`` has index ``(a-1)*p + b``, so the identity ``x -> x``
    sits at 0 and the stabiliser of 0 occupies the indices ``(a-1)*p``.
    """
    if not is_prime(p):
        raise GroupSpecError(f"affine group needs a prime, got {p}")
    order = p * (p - 1)

    def idx(a: int, b: int) -> int:
        return (a - 1) * p + b

    mult = np.empty((order, order), dtype=np.int64)
    for a in range(1, p):
        for b in range(p):
            i = idx(a, b)
            for c in range(1, p):
                for d in range(p):
                    mult[i, idx(c, d)] = idx((a * c) % p, (a * d + b) % p)
    labels = [f"{a}x+{b}" for a in range(1, p) for b in range(p)]
    return _build_group(mult, labels, f"affine:p={p}", trusted=True)


def heisenberg_group(p: int) -> Group:
    """Heisenberg group mod p: triples ``(a, b, c)`` with
    ``(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b')``; index ``a p^2 + b p + c``."""
    if not is_prime(p):
        raise GroupSpecError(f"heisenberg group needs a prime, got {p}")
    order = p**3
    mult = np.empty((order, order), dtype=np.int64)
    triples = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]
    for i, (a, b, c) in enumerate(triples):
        for j, (x, y, z) in enumerate(triples):
            mult[i, j] = ((a + x) % p) * p * p + ((b + y) % p) * p + ((c + z + a * y) % p)
    labels = [f"({a},{b},{c})" for a, b, c in triples]
    return _build_group(mult, labels, f"heisenberg:p={p}", trusted=True)


_SPEC_RE = re.compile(r"^(?P<kind>[a-z_]+):(?P<param>[np])=(?P<value>\d+)$")


def make_group(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """Build a group from a spec string.

    Grammar: ``cyclic:n=<int>``, ``dihedral:n=<int>``, ``symmetric:n=<int>``,
    ``affine:p=<prime>``, ``heisenberg:p=<prime>``.
    """
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise GroupSpecError(f"cannot parse group spec {spec!r}")
    kind, param, value = m.group("kind"), m.group("param"), int(m.group("value"))
    builders = {
        ("cyclic", "n"): cyclic_group,
        ("dihedral", "n"): dihedral_group,
        ("symmetric", "n"): lambda n: symmetric_group(n, max_order=max_order),
        ("affine", "p"): affine_group,
        ("heisenberg", "p"): heisenberg_group,
    }
    builder = builders.get((kind, param))
    if builder is None:
        raise GroupSpecError(f"unknown group family {kind!r} (or wrong parameter name)")
    group = builder(value)
    if group.order > max_order:
        raise DimensionGuardError(
            f"group order {group.order} exceeds the guard {max_order}; raise max_order to override"
        )
    return group


# ---------------------------------------------------------------------------
# subgroups


def subgroup_from_elements(parent: Group, elements) -> Subgroup:
    """Wrap a set of indices as a Subgroup, verifying closure and Lagrange."""
    elems = sorted({int(x) for x in elements} | {0})
    eset = set(elems)
    for a in elems:
        if int(parent.inv[a]) not in eset:
            raise GroupSpecError(f"subset not closed under inverse at {a}")
        for b in elems:
            if int(parent.mult[a, b]) not in eset:
                raise GroupSpecError(f"subset not closed under product at ({a},{b})")
    if parent.order % len(elems) != 0:
        raise GroupSpecError("subset size does not divide the group order")
    return Subgroup(parent=parent, elements=tuple(elems))


def subgroup_generate(parent: Group, gens) -> Subgroup:
    """Smallest subgroup containing ``gens`` (and the identity)."""
    gens = [int(g) for g in gens]
    for g in gens:
        if not 0 <= g < parent.order:
            raise GroupSpecError(f"generator index {g} out of range")
    closed = {0}
    frontier = [0]
    gens_all = gens + [int(parent.inv[g]) for g in gens]
    while frontier:
        x = frontier.pop()
        for g in gens_all:
            y = int(parent.mult[x, g])
            if y not in closed:
                closed.add(y)
                frontier.append(y)
    return Subgroup(parent=parent, elements=tuple(sorted(closed)))


def all_subgroups(parent: Group) -> list[Subgroup]:
    """Every subgroup, by breadth-first closure over added generators.

    Cost grows with the subgroup count times the order; intended for the
    small fixture groups (order up to a few hundred).
    """
    trivial = frozenset({0})
    seen = {trivial}
    frontier = [trivial]
    while frontier:
        current = frontier.pop()
        for g in range(parent.order):
            if g in current:
                continue
            grown = frozenset(subgroup_generate(parent, set(current) | {g}).elements)
            if grown not in seen:
                seen.add(grown)
                frontier.append(grown)
    ordered = sorted(seen, key=lambda s: (len(s), tuple(sorted(s))))
    return [Subgroup(parent=parent, elements=tuple(sorted(s))) for s in ordered]


def trivial_subgroup(parent: Group) -> Subgroup:
    return Subgroup(parent=parent, elements=(0,))


def full_subgroup(parent: Group) -> Subgroup:
    return Subgroup(parent=parent, elements=tuple(range(parent.order)))


def conjugate_subgroup(H: Subgroup, g: int) -> Subgroup:
    """Return ``H^g = g^-1 H g``."""
    G = H.parent
    return Subgroup(parent=G, elements=tuple(sorted(G.conj(h, g) for h in H.elements)))


def conjugate_family(H: Subgroup) -> ConjugateFamily:
    """Enumerate the distinct conjugates of ``H`` in canonical order."""
    G = H.parent
    seen: dict[tuple[int, ...], list[int]] = {}
    order_of_g = np.empty(G.order, dtype=np.int64)
    keys_by_g: list[tuple[int, ...]] = []
    for g in range(G.order):
        key = tuple(sorted(G.conj(h, g) for h in H.elements))
        seen.setdefault(key, []).append(g)
        keys_by_g.append(key)
    canon = sorted(seen)
    pos = {key: i for i, key in enumerate(canon)}
    coset_map = np.array([pos[k] for k in keys_by_g], dtype=np.int64)
    conjugates = tuple(Subgroup(parent=G, elements=key) for key in canon)
    reps = tuple(min(seen[key]) for key in canon)
    sizes = {len(v) for v in seen.values()}
    if len(sizes) != 1:
        raise AssertionError("conjugate preimages have unequal sizes")  # cannot happen
    return ConjugateFamily(subgroup=H, conjugates=conjugates, reps=reps, coset_map=_freeze(coset_map))


def normalizer(H: Subgroup) -> Subgroup:
    """``{ g : H^g = H }``."""
    G = H.parent
    hset = H.as_set()
    fixing = [g for g in range(G.order) if {G.conj(h, g) for h in H.elements} == hset]
    return Subgroup(parent=G, elements=tuple(sorted(fixing)))


def normal_core(H: Subgroup) -> Subgroup:
    """Largest normal subgroup of the parent contained in ``H`` (the
    intersection of all conjugates)."""
    core = H.as_set()
    for conj in conjugate_family(H).conjugates:
        core &= conj.as_set()
    return Subgroup(parent=H.parent, elements=tuple(sorted(core)))


def is_normal(H: Subgroup) -> bool:
    return conjugate_family(H).size == 1


def left_cosets(H: Subgroup) -> list[list[int]]:
    """Partition of the parent into left cosets ``cH``, each sorted, blocks
    ordered by their smallest element."""
    G = H.parent
    unassigned = np.ones(G.order, dtype=bool)
    blocks = []
    for c in range(G.order):
        if unassigned[c]:
            block = sorted(int(G.mult[c, h]) for h in H.elements)
            blocks.append(block)
            unassigned[block] = False
    return blocks


def double_cosets(H: Subgroup) -> list[list[int]]:
    """Partition of the parent into double cosets ``HgH``."""
    G = H.parent
    unassigned = np.ones(G.order, dtype=bool)
    blocks = []
    for g in range(G.order):
        if unassigned[g]:
            block = sorted({int(G.mult[G.mult[a, g], b]) for a in H.elements for b in H.elements})
            blocks.append(block)
            unassigned[block] = False
    return blocks


# ---------------------------------------------------------------------------
# direct powers


def group_power(G: Group, k: int, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """Direct power ``G^k`` with register-major indexing (register 1 most
    significant): the tuple ``(x_1..x_k)`` has index ``sum x_i |G|^(k-i)``."""
    if k < 1:
        raise GroupSpecError("power k must be >= 1")
    order = G.order**k
    if order > max_order:
        raise DimensionGuardError(
            f"|G|^{k} = {order} exceeds the guard {max_order}; raise max_order to override"
        )
    if k == 1:
        return Group(G.order, G.mult, G.inv, G.labels, f"power:k=1;{G.family}")
    digits = np.array(list(itertools.product(range(G.order), repeat=k)), dtype=np.int64)
    mult = np.zeros((order, order), dtype=np.int64)
    for reg in range(k):
        comp = G.mult[np.ix_(digits[:, reg], digits[:, reg])]
        mult = mult * G.order + comp
    labels = ["|".join(G.labels[d] for d in row) for row in digits]
    return _build_group(mult, labels, f"power:k={k};{G.family}", trusted=True)


def subgroup_power(H: Subgroup, k: int, power: Group | None = None,
                   max_order: int = DEFAULT_MAX_ORDER) -> Subgroup:
    """Map ``H`` to ``H^k`` inside ``group_power(parent, k)``."""
    G = H.parent
    if power is None:
        power = group_power(G, k, max_order=max_order)
    elems = []
    for tup in itertools.product(H.elements, repeat=k):
        i = 0
        for x in tup:
            i = i * G.order + x
        elems.append(i)
    return Subgroup(parent=power, elements=tuple(sorted(elems)))


# ---------------------------------------------------------------------------
# named subgroups / spec parsing


def _family_params(G: Group) -> tuple[str, dict[str, int]]:
    kind, _, rest = G.family.partition(":")
    params = {}
    for part in rest.split(";"):
        if "=" in part:
            key, _, val = part.partition("=")
            if val.isdigit():
                params[key] = int(val)
    return kind, params


def _symmetric_perms(G: Group) -> list[tuple[int, ...]]:
    kind, params = _family_params(G)
    if kind != "symmetric":
        raise GroupSpecError(f"subgroup shortcut needs a symmetric group, got {G.family!r}")
    return _perm_list(params["n"])


def _matching_permutation(n: int) -> tuple[int, ...]:
    # (0 1)(2 3)...(n-2 n-1)
    out = list(range(n))
    for i in range(0, n, 2):
        out[i], out[i + 1] = out[i + 1], out[i]
    return tuple(out)


def dihedral_reflection_subgroup(G: Group) -> Subgroup:
    kind, params = _family_params(G)
    if kind != "dihedral":
        raise GroupSpecError(f"'reflection' needs a dihedral group, got {G.family!r}")
    n = params["n"]
    if n % 2 == 0:
        # For even n the reflections fall in two conjugacy classes and the
        # conjugate promise covers only one of them; the named fixture is
        # therefore restricted to odd n.
        raise GroupSpecError("'reflection' fixture is defined for odd n only")
    return subgroup_from_elements(G, [0, n])


def affine_stabilizer_subgroup(G: Group) -> Subgroup:
    kind, params = _family_params(G)
    if kind != "affine":
        raise GroupSpecError(f"'zp_star' needs an affine group, got {G.family!r}")
    p = params["p"]
    return subgroup_from_elements(G, [(a - 1) * p for a in range(1, p)])


def symmetric_matching_subgroup(G: Group) -> Subgroup:
    perms = _symmetric_perms(G)
    n = len(perms[0])
    if n % 2:
        raise GroupSpecError("'matching' needs even n")
    target = _matching_permutation(n)
    return subgroup_from_elements(G, [0, perms.index(target)])


def symmetric_young_subgroup(G: Group, m: int) -> Subgroup:
    """``S_m x S_{n-m}``: permutations preserving ``{0..m-1}`` as a set."""
    perms = _symmetric_perms(G)
    n = len(perms[0])
    if not 0 <= m <= n:
        raise GroupSpecError(f"young:m needs 0 <= m <= {n}")
    first = set(range(m))
    keep = [i for i, p in enumerate(perms) if {p[x] for x in range(m)} == first]
    return subgroup_from_elements(G, keep)


def symmetric_hyperoctahedral_subgroup(G: Group) -> Subgroup:
    """Centralizer of the adjacent-pairs matching involution."""
    perms = _symmetric_perms(G)
    n = len(perms[0])
    if n % 2:
        raise GroupSpecError("'hyperoctahedral' needs even n")
    m = _matching_permutation(n)
    keep = [
        i
        for i, p in enumerate(perms)
        if all(p[m[x]] == m[p[x]] for x in range(n))
    ]
    return subgroup_from_elements(G, keep)


_GENS_RE = re.compile(r"^gens=\[(?P<body>[\d,\s]*)\]$")


def parse_subgroup_spec(G: Group, spec: str) -> Subgroup:
    """Parse a subgroup spec: ``gens=[i,j,...]`` or a named shortcut
    (``reflection``, ``zp_star``, ``matching``, ``young:m``,
    ``hyperoctahedral``)."""
    spec = spec.strip()
    m = _GENS_RE.match(spec)
    if m:
        body = m.group("body").strip()
        gens = [int(tok) for tok in body.split(",") if tok.strip()] if body else []
        return subgroup_generate(G, gens)
    if spec == "reflection":
        return dihedral_reflection_subgroup(G)
    if spec == "zp_star":
        return affine_stabilizer_subgroup(G)
    if spec == "matching":
        return symmetric_matching_subgroup(G)
    if spec == "hyperoctahedral":
        return symmetric_hyperoctahedral_subgroup(G)
    ym = re.match(r"^young:(\d+)$", spec)
    if ym:
        return symmetric_young_subgroup(G, int(ym.group(1)))
    raise GroupSpecError(f"cannot parse subgroup spec {spec!r}")
