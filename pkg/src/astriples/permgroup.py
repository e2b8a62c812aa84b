"""Finite permutation groups with fully materialized element sets.

Permutations are image tuples: p[i] is where point i goes.  Groups are
closed by breadth-first multiplication from their generators; desk-scale
groups here stay well under the default element cap, so no stabilizer
chains are needed.  Orbit computations run union-find over cell spaces
seeded by generator images only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as _point_perms

from .core import (AstScheme, GroundSet, TernaryRelation, TriplePartition)
from .errors import (ConsistencyError, PreconditionError, SizeGuardError,
                     StructuralError)

Perm = tuple[int, ...]

DEFAULT_MAX_ELEMENTS = 10**7

#: Exhaustive invariant-cycle search is limited to this many points.
CYCLE_SEARCH_LIMIT = 8


def check_perm(p) -> Perm:
    p = tuple(p)
    if sorted(p) != list(range(len(p))):
        raise StructuralError(f"not a permutation: {p!r}")
    return p


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """Apply p first, then q."""
    return tuple(map(q.__getitem__, p))


def inverse_perm(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_from_cycles(n: int, cycles) -> Perm:
    """Build a permutation on 0..n-1 from disjoint 0-based cycles."""
    images = list(range(n))
    seen = set()
    for cycle in cycles:
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            if a in seen or not 0 <= a < n:
                raise StructuralError(f"bad cycle entry {a} in {cycles!r}")
            seen.add(a)
            images[a] = b
    return tuple(images)


def cycle_type(p: Perm) -> tuple[int, ...]:
    """Sorted cycle lengths, including fixed points."""
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if not seen[i]:
            j, size = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                size += 1
            lengths.append(size)
    return tuple(sorted(lengths))


def parse_permutation_line(line: str, degree=None) -> Perm:
    """Parse a 0-based one-line image array like "2 0 1"."""
    try:
        images = tuple(int(tok) for tok in line.split())
    except ValueError as exc:
        raise StructuralError(f"bad permutation line {line!r}") from exc
    if degree is not None and len(images) != degree:
        raise StructuralError(
            f"expected degree {degree}, got {len(images)} images")
    return check_perm(images)


def permutation_to_line(p: Perm) -> str:
    return " ".join(str(i) for i in p)


def generators_from_text(text: str) -> list[Perm]:
    """One permutation per non-empty line, all of the same degree."""
    perms = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        perms.append(parse_permutation_line(
            line, degree=len(perms[0]) if perms else None))
    if not perms:
        raise StructuralError("no permutations in generator text")
    return perms


@dataclass(frozen=True)
class PermutationGroup:
    """A closed permutation group: generators plus its full element set."""

    degree: int
    generators: tuple[Perm, ...]
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p):
        return tuple(p) in self.elements

    def __repr__(self):
        return (f"PermutationGroup(degree={self.degree}, "
                f"order={self.order}, generators={len(self.generators)})")


def close(generators, degree=None,
          max_elements=DEFAULT_MAX_ELEMENTS) -> PermutationGroup:
    """Breadth-first closure of a generator list.

    An empty generator list needs an explicit ``degree`` and yields the
    trivial group.  Exceeding ``max_elements`` raises
    :class:`SizeGuardError`.
    """
    gens = [check_perm(g) for g in generators]
    if gens:
        degs = {len(g) for g in gens}
        if len(degs) != 1:
            raise PreconditionError(f"mixed generator degrees: {sorted(degs)}")
        degree = degs.pop()
    elif degree is None:
        raise PreconditionError("empty generator list needs a degree")
    ident = identity_perm(degree)
    elements = {ident}
    frontier = [ident]
    while frontier:
        fresh = []
        for g in gens:
            for x in frontier:
                y = tuple(map(g.__getitem__, x))
                if y not in elements:
                    elements.add(y)
                    fresh.append(y)
                    if len(elements) > max_elements:
                        raise SizeGuardError(
                            f"group exceeds {max_elements} elements")
        frontier = fresh
    return PermutationGroup(degree=degree, generators=tuple(gens),
                            elements=frozenset(elements))


def group_from_elements(degree, elements, seed_generators) -> PermutationGroup:
    """Wrap an explicitly enumerated group with a small verified generator set.

    Seeds are grown with missing elements until their closure reproduces
    the enumerated set exactly, so orbit computations can trust the
    generators alone.
    """
    element_set = frozenset(check_perm(p) for p in elements)
    gens = [check_perm(g) for g in seed_generators]
    for g in gens:
        if g not in element_set:
            raise ConsistencyError("seed generator outside the element set")
    while True:
        grp = close(gens, degree=degree)
        if not grp.elements <= element_set:
            raise ConsistencyError(
                "enumerated element set is not closed under composition")
        if grp.elements == element_set:
            return grp
        gens.append(min(element_set - grp.elements))


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra > rb:
                ra, rb = rb, ra
            self.parent[rb] = ra


def orbits_on_points(group: PermutationGroup) -> list[tuple[int, ...]]:
    uf = _UnionFind(group.degree)
    for g in group.generators:
        for i, j in enumerate(g):
            uf.union(i, j)
    buckets = {}
    for i in range(group.degree):
        buckets.setdefault(uf.find(i), []).append(i)
    return [tuple(buckets[root]) for root in sorted(buckets)]


def is_transitive(group: PermutationGroup) -> bool:
    return len(orbits_on_points(group)) == 1


def is_two_transitive(group: PermutationGroup) -> bool:
    """Single orbit on ordered pairs of distinct points."""
    n = group.degree
    if n < 2:
        return False
    uf = _UnionFind(n * n)
    for g in group.generators:
        for x in range(n):
            gx = g[x] * n
            xn = x * n
            for y in range(n):
                if x != y:
                    uf.union(xn + y, gx + g[y])
    root = uf.find(1)  # cell (0, 1)
    return all(uf.find(x * n + y) == root
               for x in range(n) for y in range(n) if x != y)


def pair_orbits(group: PermutationGroup) -> list[tuple]:
    """Orbits on ordered distinct pairs, each as a sorted tuple of pairs."""
    n = group.degree
    uf = _UnionFind(n * n)
    for g in group.generators:
        for x in range(n):
            for y in range(n):
                if x != y:
                    uf.union(x * n + y, g[x] * n + g[y])
    buckets = {}
    for x in range(n):
        for y in range(n):
            if x != y:
                buckets.setdefault(uf.find(x * n + y), []).append((x, y))
    return [tuple(buckets[root]) for root in sorted(buckets)]


def orbits_on_triples(group: PermutationGroup) -> TriplePartition:
    """Orbit partition of the cube under the diagonal action.

    For two-transitive groups the four trivial orbits come first in their
    standard order; remaining classes are ordered by least representative.
    """
    n = group.degree
    ground = GroundSet(n)
    n2 = n * n
    uf = _UnionFind(n * n2)
    for g in group.generators:
        for x in range(n):
            gx = g[x] * n2
            for y in range(n):
                gxy = gx + g[y] * n
                base = x * n2 + y * n
                for z in range(n):
                    uf.union(base + z, gxy + g[z])
    buckets = {}
    for idx in range(n * n2):
        buckets.setdefault(uf.find(idx), []).append(idx)
    ordered_roots = sorted(buckets)
    if is_two_transitive(group):
        lead = [uf.find(0),                      # (0, 0, 0)
                uf.find(n + 1),                  # (0, 1, 1)
                uf.find(n2 + 1),                 # (1, 0, 1)
                uf.find(n2 + n)]                 # (1, 1, 0)
        if len(set(lead)) != 4:
            raise ConsistencyError("trivial orbits collide")
        ordered_roots = lead + [r for r in ordered_roots if r not in set(lead)]
    classes = []
    for root in ordered_roots:
        triples = tuple(ground.triple(idx) for idx in buckets[root])
        classes.append(TernaryRelation(ground, triples))
    return TriplePartition(ground, tuple(classes))


def two_point_stabilizer_orbits(group: PermutationGroup, x: int, y: int):
    """Orbits of the pointwise stabilizer of (x, y) on the remaining points.

    For a two-transitive group these are in bijection with the nontrivial
    relations of its orbit scheme, with sizes the third valencies.
    """
    if x == y:
        raise PreconditionError("stabilizer points must be distinct")
    if not is_two_transitive(group):
        raise PreconditionError("two-point stabilizer orbits are only "
                                "meaningful for two-transitive groups here")
    n = group.degree
    stab = [p for p in group.elements if p[x] == x and p[y] == y]
    uf = _UnionFind(n)
    for p in stab:
        for i, j in enumerate(p):
            uf.union(i, j)
    buckets = {}
    for i in range(n):
        if i != x and i != y:
            buckets.setdefault(uf.find(i), []).append(i)
    return [tuple(buckets[root]) for root in sorted(buckets)]


def is_invariant(rel: TernaryRelation, p) -> bool:
    """True iff the diagonal action of p maps the relation onto itself."""
    p = check_perm(p)
    if len(p) != rel.ground.nu:
        raise PreconditionError("permutation degree differs from ground set")
    ts = rel.triple_set
    return all((p[x], p[y], p[z]) in ts for x, y, z in rel.triples)


def _is_full_cycle(p: Perm) -> bool:
    return cycle_type(p) == (len(p),)


def is_circulant_ast(scheme: AstScheme, cycle) -> bool:
    """True iff every nontrivial relation is invariant under the given
    full cycle (hence under the transitive cyclic group it generates)."""
    cycle = check_perm(cycle)
    if not _is_full_cycle(cycle):
        raise PreconditionError(f"{cycle!r} is not a single full cycle")
    return all(is_invariant(scheme.relation(i), cycle)
               for i in scheme.nontrivial_labels)


def find_invariant_cycle(scheme: AstScheme):
    """Exhaustive search for a full cycle witnessing circulance, or None.

    Off the default paths: cost grows as (nu-1)!, so it is guarded to
    nu <= CYCLE_SEARCH_LIMIT.
    """
    nu = scheme.nu
    if nu > CYCLE_SEARCH_LIMIT:
        raise SizeGuardError(
            f"cycle search is limited to nu <= {CYCLE_SEARCH_LIMIT}")
    for rest in _point_perms(range(1, nu)):
        seq = (0,) + rest
        images = [0] * nu
        for pos, pt in enumerate(seq):
            images[pt] = seq[(pos + 1) % nu]
        cycle = tuple(images)
        if is_circulant_ast(scheme, cycle):
            return cycle
    return None


def is_thin(rel: TernaryRelation, a: int, b: int) -> bool:
    """True iff projecting triples to coordinates (a, b) is injective with
    image exactly the ordered distinct pairs.  Coordinates are 0-based."""
    if a == b:
        raise PreconditionError("projection coordinates must differ")
    if not (0 <= a <= 2 and 0 <= b <= 2):
        raise PreconditionError("projection coordinates must be in {0, 1, 2}")
    nu = rel.ground.nu
    if len(rel.triples) != nu * (nu - 1):
        return False
    seen = set()
    for t in rel.triples:
        pair = (t[a], t[b])
        if pair[0] == pair[1] or pair in seen:
            return False
        seen.add(pair)
    return True


def cycle_orbits_on_relation(rel: TernaryRelation, cycle) -> list[tuple]:
    """Orbits of the cyclic group generated by ``cycle`` on the relation."""
    cycle = check_perm(cycle)
    remaining = set(rel.triples)
    orbits = []
    while remaining:
        start = min(remaining)
        orbit = []
        t = start
        while t in remaining:
            remaining.remove(t)
            orbit.append(t)
            t = (cycle[t[0]], cycle[t[1]], cycle[t[2]])
        orbits.append(tuple(sorted(orbit)))
    return orbits


@dataclass(frozen=True)
class ThinDecomposition:
    """A split of a circulant relation into thin circulant pieces."""

    coords: tuple[int, int]
    pieces: tuple[tuple[int, ...], ...]
    orbits: tuple[tuple, ...]


def thin_circulant_decomposition(rel: TernaryRelation, cycle,
                                 node_budget=200_000):
    """Try to split a circulant relation into thin circulant pieces.

    Pieces are unions of cycle-orbits that each project bijectively onto
    the ordered distinct pairs under one coordinate pair.  Returns a
    :class:`ThinDecomposition` or None when no split is found within the
    budget; callers treat None as "flagged", not as a disproof.
    """
    nu = rel.ground.nu
    orbits = cycle_orbits_on_relation(rel, cycle)
    pair_target = nu * (nu - 1)
    if len(rel.triples) % pair_target:
        return None
    n_pieces = len(rel.triples) // pair_target
    for a in range(3):
        for b in range(3):
            if a == b:
                continue
            projections = []
            usable = True
            for orbit in orbits:
                pairs = {(t[a], t[b]) for t in orbit}
                if len(pairs) != len(orbit) or any(p == q for p, q in pairs):
                    usable = False
                    break
                projections.append(frozenset(pairs))
            if not usable:
                continue
            colors = [-1] * len(orbits)
            piece_pairs = [set() for _ in range(n_pieces)]
            budget = [node_budget]

            def assign(idx):
                if budget[0] <= 0:
                    return False
                budget[0] -= 1
                if idx == len(orbits):
                    return all(len(pp) == pair_target for pp in piece_pairs)
                used_new = False
                for color in range(n_pieces):
                    if not piece_pairs[color] and used_new:
                        break  # symmetry: first empty piece only
                    if not piece_pairs[color]:
                        used_new = True
                    if piece_pairs[color] & projections[idx]:
                        continue
                    piece_pairs[color] |= projections[idx]
                    colors[idx] = color
                    if assign(idx + 1):
                        return True
                    piece_pairs[color] -= projections[idx]
                    colors[idx] = -1
                return False

            if assign(0):
                pieces = tuple(
                    tuple(i for i, c in enumerate(colors) if c == color)
                    for color in range(n_pieces))
                return ThinDecomposition(coords=(a, b), pieces=pieces,
                                         orbits=tuple(orbits))
    return None
