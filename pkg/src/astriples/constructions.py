"""Scheme constructions and transformations.

Covers the orbit construction from two-transitive groups, the block
construction from lambda = 1 designs and its extraction inverse, the
regular-two-graph equivalence with its vanishing intersection numbers,
and fusion/fission of schemes with the triple-sum law relating coarse
and fine structure constants.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations

from .core import (AstScheme, GroundSet, TernaryRelation, TriplePartition,
                   ViolationReport, is_symmetric_relation, trivial_relations,
                   verify_ast)
from .designs import TwoDesign, TwoGraph, is_regular, verify_design, verify_two_graph
from .errors import (ConsistencyError, PreconditionError, RefusalError,
                     StructuralError)
from .permgroup import PermutationGroup, is_two_transitive, orbits_on_triples, pair_orbits

#: The eight vanishing intersection numbers of the two-graph equivalence.
#: The strict form ends in p_554^4, the lenient form in p_554^5 (which
#: completes the odd-membership pattern).  On every regular two-graph
#: instance p_554^4 equals p_455^4, which need not vanish; see the README.
VANISHING_STRICT = ((4, 4, 5, 4), (4, 5, 4, 4), (5, 4, 4, 4), (5, 5, 5, 4),
                    (4, 4, 4, 5), (4, 5, 5, 5), (5, 4, 5, 5), (5, 5, 4, 4))
VANISHING_LENIENT = VANISHING_STRICT[:7] + ((5, 5, 4, 5),)


def _scheme_or_bug(partition: TriplePartition, context: str) -> AstScheme:
    result = verify_ast(partition)
    if isinstance(result, ViolationReport):
        raise ConsistencyError(f"{context}: {result.message}")
    return result


def ast_from_group(group: PermutationGroup) -> AstScheme:
    """Orbit scheme of a two-transitive group on at least 3 points.

    Refuses non-two-transitive input, citing a proper pair orbit.
    """
    if group.degree < 3:
        raise PreconditionError("need at least 3 points")
    if not is_two_transitive(group):
        witness = min(pair_orbits(group), key=len)
        raise RefusalError(
            f"group of order {group.order} is not two-transitive on "
            f"{group.degree} points", witness=witness)
    partition = orbits_on_triples(group)
    return _scheme_or_bug(partition, "orbit partition of a two-transitive group")


def _distinct_triples(nu):
    for x in range(nu):
        for y in range(nu):
            if y == x:
                continue
            for z in range(nu):
                if z != x and z != y:
                    yield (x, y, z)


def ast_from_design(design: TwoDesign) -> AstScheme:
    """Two-class scheme of a lambda = 1 design with 3 <= k < v.

    Class 4 holds the ordered distinct triples lying inside a block,
    class 5 the rest.
    """
    if design.lam != 1:
        raise RefusalError(
            f"construction needs lambda = 1, design has lambda = {design.lam}")
    if design.k < 3:
        raise RefusalError("blocks of size < 3 contain no triples")
    if design.k >= design.v:
        raise RefusalError("a single all-covering block leaves class 5 empty")
    ground = GroundSet(design.v)
    in_block = set()
    for block in design.blocks:
        for subset in combinations(block, 3):
            for order in permutations(subset):
                in_block.add(order)
    rest = tuple(t for t in _distinct_triples(design.v) if t not in in_block)
    classes = tuple(trivial_relations(ground)) + (
        TernaryRelation(ground, tuple(sorted(in_block))),
        TernaryRelation(ground, rest))
    return _scheme_or_bug(TriplePartition(ground, classes),
                          "block construction from a lambda = 1 design")


def design_from_symmetric_relation(scheme: AstScheme, i: int) -> TwoDesign:
    """The 3-subsets underlying a symmetric nontrivial relation, verified
    as a 2-design (its lambda equals the relation's third valency)."""
    if i < 4 or i > scheme.m:
        raise PreconditionError(f"label {i} is not a nontrivial relation")
    rel = scheme.relation(i)
    if not is_symmetric_relation(rel):
        raise PreconditionError(f"relation {i} is not symmetric")
    blocks = sorted({tuple(sorted(t)) for t in rel.triples})
    try:
        return verify_design(scheme.nu, blocks)
    except RefusalError as exc:
        raise ConsistencyError(
            f"3-subsets of symmetric relation {i} are not a 2-design: {exc}")


def ast_from_two_graph(tg: TwoGraph) -> AstScheme:
    """Two-class scheme of a regular two-graph.

    Class 4 holds the orderings of the two-graph's triples.  The scheme is
    verified and its odd-pattern intersection numbers are checked to
    vanish; the values of both eight-entry readings are available through
    :func:`vanishing_report`.
    """
    if not is_regular(tg):
        raise RefusalError("two-graph is not regular")
    n_all = tg.v * (tg.v - 1) * (tg.v - 2) // 6
    if not tg.triples or len(tg.triples) == n_all:
        raise RefusalError("degenerate two-graph: one class would be empty")
    ground = GroundSet(tg.v)
    delta = set()
    for t in tg.triples:
        for order in permutations(t):
            delta.add(order)
    rest = tuple(s for s in _distinct_triples(tg.v) if s not in delta)
    classes = tuple(trivial_relations(ground)) + (
        TernaryRelation(ground, tuple(sorted(delta))),
        TernaryRelation(ground, rest))
    scheme = _scheme_or_bug(TriplePartition(ground, classes),
                            "construction from a regular two-graph")
    report = vanishing_report(scheme)
    bad = {entry: value for entry, value in report["lenient"].items() if value}
    if bad:
        raise ConsistencyError(
            f"regular two-graph scheme has nonzero odd-pattern entries {bad}")
    return scheme


def vanishing_report(scheme: AstScheme) -> dict:
    """Values of the eight distinguished entries under both readings."""
    tensor = scheme.tensor
    if scheme.m != 5:
        raise PreconditionError("report needs exactly two nontrivial relations")
    return {
        "strict": {entry: tensor.get(*entry) for entry in VANISHING_STRICT},
        "lenient": {entry: tensor.get(*entry) for entry in VANISHING_LENIENT},
    }


def two_graph_from_ast(scheme: AstScheme, mode: str = "strict") -> TwoGraph:
    """Extract the two-graph of a qualifying two-class symmetric scheme.

    ``mode`` selects which eight-entry list is enforced: ``"strict"``
    ends in p_554^4, ``"lenient"`` in p_554^5.  A nonzero enforced entry raises
    :class:`RefusalError` naming it.
    """
    if mode not in ("strict", "lenient"):
        raise PreconditionError(f"unknown mode {mode!r}")
    if scheme.m != 5:
        raise PreconditionError(
            f"extraction needs exactly two nontrivial relations, "
            f"scheme has {scheme.m - 3}")
    for i in (4, 5):
        if not is_symmetric_relation(scheme.relation(i)):
            raise PreconditionError(f"relation {i} is not symmetric")
    entries = VANISHING_STRICT if mode == "strict" else VANISHING_LENIENT
    tensor = scheme.tensor
    for entry in entries:
        value = tensor.get(*entry)
        if value:
            i, j, k, l = entry
            raise RefusalError(
                f"p_{i}{j}{k}^{l} = {value} is nonzero", witness=(entry, value))
    delta = sorted({tuple(sorted(t)) for t in scheme.relation(4).triples})
    tg = verify_two_graph(scheme.nu, delta)
    if not is_regular(tg):
        raise ConsistencyError(
            "vanishing conditions held but the extracted family is not a "
            "regular two-graph")
    return tg


# ---------------------------------------------------------------------------
# Fusion and fission


@dataclass(frozen=True)
class FusionGrouping:
    """Coarse label -> set of fine labels; trivial labels map identically.

    Nontrivial coarse classes are normalized to ascending least fine
    label, which fixes the coarse labeling deterministically.
    """

    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        groups = tuple(tuple(sorted(g)) for g in self.groups)
        head = groups[:4]
        tail = sorted(groups[4:], key=lambda g: min(g, default=-1))
        object.__setattr__(self, "groups", head + tuple(tail))

    @classmethod
    def identity(cls, m: int):
        return cls(tuple((i,) for i in range(m + 1)))

    @classmethod
    def all_nontrivial_into_one(cls, m: int):
        return cls(((0,), (1,), (2,), (3,), tuple(range(4, m + 1))))

    @property
    def n(self) -> int:
        """Largest coarse label."""
        return len(self.groups) - 1

    def validate(self, m: int):
        flat = [i for g in self.groups for i in g]
        if sorted(flat) != list(range(m + 1)):
            raise StructuralError(
                f"groups do not partition the labels 0..{m}")
        if self.groups[:4] != ((0,), (1,), (2,), (3,)):
            raise StructuralError(
                "the four trivial labels must map to themselves, first")
        for g in self.groups[4:]:
            if any(i < 4 for i in g):
                raise StructuralError(
                    f"coarse class {g} mixes trivial and nontrivial labels")

    def fine_of(self, alpha: int) -> tuple[int, ...]:
        return self.groups[alpha]


def grouping_to_json(grouping: FusionGrouping) -> str:
    return json.dumps({"groups": [list(g) for g in grouping.groups]},
                      sort_keys=True) + "\n"


def grouping_from_json(text: str) -> FusionGrouping:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "groups" not in data:
        raise StructuralError("grouping JSON needs 'groups'")
    return FusionGrouping(tuple(tuple(int(i) for i in g)
                                for g in data["groups"]))


def fuse(scheme: AstScheme, grouping: FusionGrouping):
    """Union the fine classes per coarse label and re-verify.

    Arbitrary groupings can break the defining conditions; that outcome is
    reported as the :class:`ViolationReport` of the failed verification,
    not raised.
    """
    grouping.validate(scheme.m)
    ground = scheme.ground
    classes = []
    for group in grouping.groups:
        triples = []
        for i in group:
            triples.extend(scheme.relation(i).triples)
        classes.append(TernaryRelation(ground, tuple(triples)))
    return verify_ast(TriplePartition(ground, tuple(classes)))


def is_fission_of(fine: AstScheme, coarse: AstScheme):
    """The grouping exhibiting ``fine`` as a fission of ``coarse``, or None.

    Exists iff every fine class is contained in some coarse class.
    """
    if fine.ground != coarse.ground:
        raise PreconditionError("schemes live on different ground sets")
    coarse_labels = coarse.labels
    ground = fine.ground
    groups = [[] for _ in range(coarse.m + 1)]
    for i, rel in enumerate(fine.classes):
        targets = {coarse_labels[ground.index(t)] for t in rel.triples}
        if len(targets) != 1:
            return None
        groups[targets.pop()].append(i)
    return FusionGrouping(tuple(tuple(g) for g in groups))


@dataclass(frozen=True)
class FusionTheoremReport:
    """Dual-path comparison of coarse structure constants and valencies."""

    checked_cells: int
    mismatches: tuple
    valency_failures: tuple
    fused: AstScheme

    @property
    def passed(self):
        return not self.mismatches and not self.valency_failures


def verify_fusion_theorem(scheme: AstScheme,
                          grouping: FusionGrouping) -> FusionTheoremReport:
    """Check the triple-sum law for a fusing grouping.

    For every coarse index tuple the sum of fine intersection numbers over
    the grouped labels must be independent of the fine representative of
    the superscript class and equal the directly computed coarse constant;
    coarse third valencies must be the sums of their fine third valencies.
    """
    fused = fuse(scheme, grouping)
    if isinstance(fused, ViolationReport):
        raise PreconditionError(
            f"grouping does not produce a scheme: {fused.message}")
    fine_t = scheme.tensor
    coarse_t = fused.tensor
    n = fused.m
    mismatches = []
    checked = 0
    for alpha in range(n + 1):
        ga = grouping.fine_of(alpha)
        for beta in range(n + 1):
            gb = grouping.fine_of(beta)
            for gamma in range(n + 1):
                gg = grouping.fine_of(gamma)
                for delta in range(n + 1):
                    checked += 1
                    sums = []
                    for l in grouping.fine_of(delta):
                        total = 0
                        for i in ga:
                            for j in gb:
                                for k in gg:
                                    total += fine_t.get(i, j, k, l)
                        sums.append(total)
                    direct = coarse_t.get(alpha, beta, gamma, delta)
                    if len(set(sums)) != 1 or sums[0] != direct:
                        mismatches.append(
                            ((alpha, beta, gamma, delta), tuple(sums), direct))
    valency_failures = []
    for eps in range(n + 1):
        want = sum(scheme.valencies.third(i) for i in grouping.fine_of(eps))
        got = fused.valencies.third(eps)
        if want != got:
            valency_failures.append((eps, got, want))
    return FusionTheoremReport(checked_cells=checked,
                               mismatches=tuple(mismatches),
                               valency_failures=tuple(valency_failures),
                               fused=fused)


@dataclass(frozen=True)
class TwoGraphFusionResult:
    """Outcome of the symmetric-index two-graph fusion test."""

    two_graph: TwoGraph | None
    failing_quadruple: tuple | None


def two_graph_fusion(scheme: AstScheme, j_labels) -> TwoGraphFusionResult:
    """Fuse the symmetric classes in ``j_labels`` into a two-graph.

    Requires more than two nontrivial relations and every listed class
    symmetric.  If some nontrivial quadruple with an odd number of members
    in the index set has a nonzero intersection number, returns the
    quadruple instead of a two-graph.
    """
    j_set = frozenset(j_labels)
    nontrivial = set(scheme.nontrivial_labels)
    if len(nontrivial) <= 2:
        raise PreconditionError(
            "fusion to a two-graph needs more than two nontrivial relations")
    if not j_set or not j_set <= nontrivial:
        raise PreconditionError(
            f"index set {sorted(j_set)} must be a nonempty set of "
            "nontrivial labels")
    for i in sorted(j_set):
        if not is_symmetric_relation(scheme.relation(i)):
            raise PreconditionError(f"relation {i} is not symmetric")
    tensor = scheme.tensor
    labels = sorted(nontrivial)
    for i in labels:
        for j in labels:
            for k in labels:
                for l in labels:
                    members = ((i in j_set) + (j in j_set)
                               + (k in j_set) + (l in j_set))
                    if members % 2 and tensor.get(i, j, k, l):
                        return TwoGraphFusionResult(
                            two_graph=None, failing_quadruple=(i, j, k, l))
    delta = sorted({tuple(sorted(t))
                    for i in sorted(j_set)
                    for t in scheme.relation(i).triples})
    try:
        tg = verify_two_graph(scheme.nu, delta)
    except RefusalError as exc:
        raise ConsistencyError(
            f"odd-pattern hypothesis held but the family is not a "
            f"two-graph: {exc}")
    if not is_regular(tg):
        raise ConsistencyError(
            "odd-pattern hypothesis held but the two-graph is not regular")
    return TwoGraphFusionResult(two_graph=tg, failing_quadruple=None)
