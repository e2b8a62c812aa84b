"""2-designs and two-graphs: verification, regularity, brute-force search."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import PreconditionError, RefusalError, SizeGuardError, StructuralError

#: Bound on the exhaustive regular-two-graph search.
TWO_GRAPH_SEARCH_LIMIT = 8


@dataclass(frozen=True)
class TwoDesign:
    """A verified 2-design: every point pair lies in exactly lam blocks."""

    v: int
    blocks: tuple[tuple[int, ...], ...]
    k: int
    lam: int

    @property
    def b(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class TwoGraph:
    """A verified two-graph: every 4-subset holds an even number of triples."""

    v: int
    triples: tuple[tuple[int, int, int], ...]

    @property
    def triple_set(self):
        return frozenset(self.triples)


def _clean_subsets(v, raw, size, what):
    cleaned = []
    for entry in raw:
        block = tuple(sorted(entry))
        if len(set(block)) != len(block):
            raise StructuralError(f"{what} {entry!r} repeats a point")
        if size is not None and len(block) != size:
            raise StructuralError(f"{what} {entry!r} does not have size {size}")
        if block and not (0 <= block[0] and block[-1] < v):
            raise StructuralError(f"{what} {entry!r} out of range for v={v}")
        cleaned.append(block)
    return tuple(sorted(cleaned))


def verify_design(v: int, blocks) -> TwoDesign:
    """Check constant pair coverage and uniform block size.

    Raises :class:`RefusalError` naming an uneven pair when the input is
    not a 2-design.
    """
    if v < 2:
        raise PreconditionError("a design needs at least two points")
    cleaned = _clean_subsets(v, blocks, None, "block")
    if not cleaned:
        raise RefusalError("no blocks given")
    sizes = {len(b) for b in cleaned}
    if len(sizes) != 1:
        raise RefusalError(f"block sizes are not uniform: {sorted(sizes)}")
    k = sizes.pop()
    if k < 2:
        raise RefusalError("blocks must contain at least two points")
    coverage = {}
    for block in cleaned:
        for pair in combinations(block, 2):
            coverage[pair] = coverage.get(pair, 0) + 1
    lam = None
    for pair in combinations(range(v), 2):
        count = coverage.get(pair, 0)
        if lam is None:
            lam = count
        elif count != lam:
            raise RefusalError(
                f"pair coverage is not constant: {pair} lies in {count} "
                f"blocks, expected {lam}", witness=pair)
    if lam == 0:
        raise RefusalError("no pair is covered; not a 2-design")
    return TwoDesign(v=v, blocks=cleaned, k=k, lam=lam)


def verify_two_graph(v: int, triples) -> TwoGraph:
    """Check the even-intersection condition over all 4-subsets."""
    if v < 4:
        raise PreconditionError("a two-graph needs at least four points")
    cleaned = _clean_subsets(v, triples, 3, "triple")
    if len(set(cleaned)) != len(cleaned):
        raise StructuralError("duplicate triples")
    member = frozenset(cleaned)
    for quad in combinations(range(v), 4):
        count = sum(1 for t in combinations(quad, 3) if t in member)
        if count % 2:
            raise RefusalError(
                f"4-subset {quad} contains {count} triples (odd)",
                witness=quad)
    return TwoGraph(v=v, triples=cleaned)


def pair_coverage(tg: TwoGraph) -> dict:
    cover = {pair: 0 for pair in combinations(range(tg.v), 2)}
    for t in tg.triples:
        for pair in combinations(t, 2):
            cover[pair] += 1
    return cover


def is_regular(tg: TwoGraph) -> bool:
    """True iff every point pair lies in the same number of triples."""
    return len(set(pair_coverage(tg).values())) == 1


def complement_two_graph(tg: TwoGraph) -> TwoGraph:
    """Swap triple membership within all 3-subsets; again a two-graph."""
    member = tg.triple_set
    rest = tuple(t for t in combinations(range(tg.v), 3) if t not in member)
    return verify_two_graph(tg.v, rest)


def two_graph_from_graph(v: int, edges) -> TwoGraph:
    """The two-graph of a graph: 3-subsets spanning an odd number of edges."""
    edge_set = {tuple(sorted(e)) for e in edges}
    triples = []
    for t in combinations(range(v), 3):
        count = sum(1 for pair in combinations(t, 2) if pair in edge_set)
        if count % 2:
            triples.append(t)
    return verify_two_graph(v, triples)


def find_regular_two_graphs(nu: int, proper: bool = True) -> list[TwoGraph]:
    """Exhaustive list of regular two-graphs on nu points.

    Every switching class contains exactly one graph in which the last
    point is isolated, so scanning all graphs on the first nu - 1 points
    visits each two-graph once; that is the symmetry pruning that keeps
    the search at 2^C(nu-1, 2) candidates.  ``proper`` drops the empty and
    complete families.
    """
    if nu < 4:
        raise PreconditionError("search needs at least four points")
    if nu > TWO_GRAPH_SEARCH_LIMIT:
        raise SizeGuardError(
            f"two-graph search is guarded to nu <= {TWO_GRAPH_SEARCH_LIMIT}")
    pairs = list(combinations(range(nu - 1), 2))
    all_triples = list(combinations(range(nu), 3))
    triple_pairs = [tuple(combinations(t, 2)) for t in all_triples]
    n_triples = len(all_triples)
    found = []
    for mask in range(1 << len(pairs)):
        edges = {pairs[i] for i in range(len(pairs)) if mask >> i & 1}
        triples = tuple(
            t for t, tp in zip(all_triples, triple_pairs)
            if sum(1 for pair in tp if pair in edges) % 2)
        if proper and (not triples or len(triples) == n_triples):
            continue
        tg = TwoGraph(v=nu, triples=triples)
        if is_regular(tg):
            found.append(tg)
    return sorted(found, key=lambda tg: tg.triples)


# ---------------------------------------------------------------------------
# JSON formats: {"v": n, "blocks": [[..], ..]} and {"v": n, "triples": [[..], ..]}

def design_to_json(d: TwoDesign) -> str:
    return json.dumps({"v": d.v, "blocks": [list(b) for b in d.blocks]},
                      sort_keys=True) + "\n"


def design_from_json(text: str) -> TwoDesign:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "v" not in data or "blocks" not in data:
        raise StructuralError("design JSON needs 'v' and 'blocks'")
    return verify_design(int(data["v"]), data["blocks"])


def two_graph_to_json(tg: TwoGraph) -> str:
    return json.dumps({"v": tg.v, "triples": [list(t) for t in tg.triples]},
                      sort_keys=True) + "\n"


def two_graph_from_json(text: str) -> TwoGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "v" not in data or "triples" not in data:
        raise StructuralError("two-graph JSON needs 'v' and 'triples'")
    return verify_two_graph(int(data["v"]), data["triples"])
