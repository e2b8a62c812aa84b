import random
from itertools import permutations, product

import pytest

import astriples as at
from astriples.core import COORD_PERMS

from conftest import THREE_POINT_RELATIONS
from naive import naive_full_tensor, naive_is_ast, naive_trivial_relations


def test_ground_set_requires_three_points():
    with pytest.raises(at.PreconditionError):
        at.GroundSet(2)
    assert at.GroundSet(3).nu == 3


def test_trivial_relations_sizes():
    for nu in (3, 4, 7):
        ground = at.GroundSet(nu)
        r = at.trivial_relations(ground)
        assert [len(rel) for rel in r] == [nu, nu * (nu - 1), nu * (nu - 1),
                                           nu * (nu - 1)]


def test_trivial_relations_match_reference_three_point_lists():
    ground = at.GroundSet(3)
    rels = at.trivial_relations(ground)
    for i in range(4):
        assert rels[i].triples == tuple(sorted(THREE_POINT_RELATIONS[i]))
    assert rels[0].triples == ((0, 0, 0), (1, 1, 1), (2, 2, 2))


def test_trivial_relations_match_naive_oracle():
    for nu in (3, 4, 5):
        rels = at.trivial_relations(at.GroundSet(nu))
        for rel, want in zip(rels, naive_trivial_relations(nu)):
            assert rel.triple_set == frozenset(want)


def test_relation_normalization_and_membership():
    ground = at.GroundSet(3)
    rel = at.TernaryRelation(ground, ((2, 1, 0), (0, 1, 2), (2, 1, 0)))
    assert rel.triples == ((0, 1, 2), (2, 1, 0))
    assert (0, 1, 2) in rel and (1, 1, 1) not in rel
    assert rel.mask == (1 << 5) | (1 << 21)  # indices 0*9+1*3+2small, 2*9+1*3
    with pytest.raises(at.StructuralError):
        at.TernaryRelation(ground, ((0, 1, 3),))


def test_verify_ast_accepts_reference_three_point_partition(three_point):
    assert three_point.m == 4
    assert [rel.triples for rel in three_point.classes] == \
        [tuple(sorted(r)) for r in THREE_POINT_RELATIONS]


def test_verify_ast_structural_errors():
    ground = at.GroundSet(3)
    trivial = at.trivial_relations(ground)
    # missing the nontrivial triples entirely
    with pytest.raises(at.StructuralError):
        at.verify_ast(at.TriplePartition(ground, tuple(trivial)))
    # overlap between classes
    r4 = at.TernaryRelation(ground, THREE_POINT_RELATIONS[4])
    overlap = at.TernaryRelation(ground, ((0, 1, 2), (0, 0, 0)))
    with pytest.raises(at.StructuralError):
        at.verify_ast(at.TriplePartition(
            ground, tuple(trivial) + (r4, overlap)))


def test_verify_ast_reports_moved_triple(three_point):
    # move one triple from the nontrivial class into R_1: still a partition,
    # but the first four classes are no longer the trivial relations
    ground = three_point.ground
    r1 = set(THREE_POINT_RELATIONS[1]) | {(0, 1, 2)}
    r4 = set(THREE_POINT_RELATIONS[4]) - {(0, 1, 2)}
    classes = (
        at.TernaryRelation(ground, THREE_POINT_RELATIONS[0]),
        at.TernaryRelation(ground, tuple(r1)),
        at.TernaryRelation(ground, THREE_POINT_RELATIONS[2]),
        at.TernaryRelation(ground, THREE_POINT_RELATIONS[3]),
        at.TernaryRelation(ground, tuple(r4)),
    )
    report = at.verify_ast(at.TriplePartition(ground, classes))
    assert isinstance(report, at.ViolationReport)
    assert report.condition in (1, 4)
    assert report.witness


def test_verify_ast_condition_one_witness():
    # valid trivial classes, nontrivial split breaking valency constancy
    ground = at.GroundSet(4)
    trivial = at.trivial_relations(ground)
    distinct = [t for t in product(range(4), repeat=3) if len(set(t)) == 3]
    part_a = tuple(t for t in distinct if t[2] in (t[0] + 1, t[0] - 3))
    part_b = tuple(t for t in distinct if t not in set(part_a))
    classes = tuple(trivial) + (at.TernaryRelation(ground, part_a),
                                at.TernaryRelation(ground, part_b))
    report = at.verify_ast(at.TriplePartition(ground, classes))
    assert isinstance(report, at.ViolationReport)
    assert report.condition in (1, 2, 3)


def test_verify_ast_exact_condition_two_failure():
    # the union of two block-disjoint Fano planes is a 2-(7,3,2) design;
    # its two-class split keeps the valencies constant and the coordinate
    # closure (both classes symmetric) but breaks the regularity counts,
    # isolating the condition-2 report path
    from itertools import permutations as point_perms
    from conftest import fano_blocks
    f1 = set(fano_blocks())
    f2 = next({tuple(sorted(p[x] for x in b)) for b in f1}
              for p in point_perms(range(7))
              if not f1 & {tuple(sorted(p[x] for x in b)) for b in f1})
    blocks = sorted(f1 | f2)
    assert at.verify_design(7, blocks).lam == 2
    ground = at.GroundSet(7)
    covered = tuple(sorted(o for b in blocks for o in permutations(b)))
    covered_set = set(covered)
    rest = tuple(t for t in product(range(7), repeat=3)
                 if len(set(t)) == 3 and t not in covered_set)
    classes = tuple(at.trivial_relations(ground)) + (
        at.TernaryRelation(ground, covered),
        at.TernaryRelation(ground, rest))
    report = at.verify_ast(at.TriplePartition(ground, classes))
    assert isinstance(report, at.ViolationReport)
    assert report.condition == 2
    assert report.witness


def test_trivial_group_orbit_partition_rejected_as_decided_by_oracle():
    # orbits of the trivial group on 4 points: singleton classes; the naive
    # checker and the library must agree on the verdict
    nu = 4
    classes = [{t} for t in product(range(nu), repeat=3)]
    ok, reason = naive_is_ast(nu, classes)
    assert not ok and "trivial" in reason
    ground = at.GroundSet(nu)
    partition = at.TriplePartition(
        ground, tuple(at.TernaryRelation(ground, (t,))
                      for t in product(range(nu), repeat=3)))
    report = at.verify_ast(partition)
    assert isinstance(report, at.ViolationReport)
    assert report.condition == 4


def test_valencies_three_point(three_point):
    assert three_point.valencies.third(4) == 1
    assert three_point.valencies.rows[:4] == (
        (0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))


def test_valencies_third_of_r3_always_zero(three_point, fano_scheme):
    for scheme in (three_point, fano_scheme):
        assert scheme.valencies.third(3) == 0


def test_asl2_3_line_valencies(asl2_schemes):
    scheme, labeling = asl2_schemes[3]
    for lab in labeling.line_labels.values():
        assert scheme.valencies.third(lab) == 3


def test_intersection_numbers_three_point(three_point):
    tensor = three_point.tensor
    assert tensor.get(4, 4, 4, 4) == 0
    assert all(v == 0 for v in tensor.slice(4, 4, 4))


def test_intersection_sum_identity(constructed_schemes):
    # summing p over (i, j, k) counts each completion point once per class
    for name, scheme in constructed_schemes.items():
        tensor = scheme.tensor
        c = scheme.m + 1
        for l in range(c):
            total = sum(tensor.get(i, j, k, l)
                        for i in range(c) for j in range(c) for k in range(c))
            assert total == scheme.nu, (name, l)


def test_fano_tensor_matches_naive_oracle(fano_scheme):
    classes = [rel.triple_set for rel in fano_scheme.classes]
    want = naive_full_tensor(7, classes)
    tensor = at.intersection_numbers(fano_scheme, full_check=True)
    c = fano_scheme.m + 1
    for i in range(c):
        for j in range(c):
            for k in range(c):
                for l in range(c):
                    assert tensor.get(i, j, k, l) == want.get((i, j, k, l), 0)


def test_permute_relation_trivial_swap(three_point):
    r1 = three_point.relation(1)
    r3 = three_point.relation(3)
    assert at.permute_relation(r1, (2, 1, 0)).triples == r3.triples
    assert at.permute_relation(r1, (0, 1, 2)).triples == r1.triples


def test_permute_relation_fixes_all_distinct_class(three_point):
    r4 = three_point.relation(4)
    for sigma in permutations(range(3)):
        assert at.permute_relation(r4, sigma).triples == r4.triples


def test_permute_relation_composition():
    rng = random.Random(7)
    ground = at.GroundSet(4)
    triples = tuple((rng.randrange(4), rng.randrange(4), rng.randrange(4))
                    for _ in range(10))
    rel = at.TernaryRelation(ground, triples)
    for s1 in permutations(range(3)):
        for s2 in permutations(range(3)):
            combined = tuple(s1[s2[i]] for i in range(3))
            step = at.permute_relation(at.permute_relation(rel, s1), s2)
            assert step.triples == at.permute_relation(rel, combined).triples


def test_permute_relation_rejects_bad_sigma(three_point):
    with pytest.raises(at.PreconditionError):
        at.permute_relation(three_point.relation(1), (0, 0, 1))


def test_symmetry_predicates(three_point, fano_scheme):
    assert at.is_symmetric_relation(three_point.relation(4))
    assert not at.is_symmetric_relation(three_point.relation(1))
    assert at.is_symmetric_ast(three_point)
    assert at.is_symmetric_ast(fano_scheme)
    assert at.is_symmetric_relation(fano_scheme.relation(4))
    assert at.is_symmetric_relation(fano_scheme.relation(5))


def test_coordinate_class_action_is_an_action(three_point, fano_scheme, asl2_schemes):
    for scheme in (three_point, fano_scheme, asl2_schemes[3][0]):
        action = at.coordinate_class_action(scheme)
        ident = action[(0, 1, 2)]
        assert ident == tuple(range(scheme.m + 1))
        for s1 in COORD_PERMS:
            for s2 in COORD_PERMS:
                combined = tuple(s1[s2[i]] for i in range(3))
                composed = tuple(action[s2][action[s1][i]]
                                 for i in range(scheme.m + 1))
                assert composed == action[combined]


def test_condition_three_closure_on_labels(three_point):
    action = at.coordinate_class_action(three_point)
    swap_first_last = action[(2, 1, 0)]
    assert swap_first_last[1] == 3 and swap_first_last[3] == 1
    assert swap_first_last[4] == 4


def test_diagonal_counts_recorded(three_point):
    assert three_point.diagonal_third_counts(0) == (1, 1, 1)
    assert three_point.diagonal_third_counts(3) == (2, 2, 2)
    assert three_point.diagonal_third_counts(4) == (0, 0, 0)


def test_partition_property(constructed_schemes):
    for name, scheme in constructed_schemes.items():
        assert sum(len(rel) for rel in scheme.classes) == scheme.nu**3, name


def test_valency_sum_identity(constructed_schemes):
    # each completion point of a distinct pair lies in exactly one class
    for name, scheme in constructed_schemes.items():
        table = scheme.valencies
        c = scheme.m + 1
        for slot in range(3):
            assert sum(table.rows[i][slot] for i in range(c)) == scheme.nu, \
                (name, slot)


def test_json_round_trip(three_point, fano_scheme):
    for scheme in (three_point, fano_scheme):
        text = at.scheme_to_json(scheme)
        partition = at.partition_from_json(text)
        again = at.ensure_ast(partition)
        assert again.serialized() == scheme.serialized()
        assert at.scheme_to_json(again) == text


def test_json_rejects_malformed():
    with pytest.raises(at.StructuralError):
        at.partition_from_json("not json at all {")
    with pytest.raises(at.StructuralError):
        at.partition_from_json('{"nu": 3}')
    with pytest.raises(at.StructuralError):
        at.partition_from_json('{"nu": 3, "relations": [[[0, 1]]]}')


def test_intersection_numbers_detect_bypassed_verification():
    # hand-build a scheme object around a partition that is NOT regular;
    # the full-check tensor computation must flag the inconsistency
    ground = at.GroundSet(4)
    trivial = at.trivial_relations(ground)
    distinct = [t for t in product(range(4), repeat=3) if len(set(t)) == 3]
    part_a = tuple(t for t in distinct if t[2] == (t[0] + 1) % 4)
    part_b = tuple(t for t in distinct if t not in set(part_a))
    partition = at.TriplePartition(
        ground, tuple(trivial) + (at.TernaryRelation(ground, part_a),
                                  at.TernaryRelation(ground, part_b)))
    assert isinstance(at.verify_ast(partition), at.ViolationReport)
    bogus = at.AstScheme(partition=partition,
                         valencies=at.ValencyTable(((0, 0, 0),) * 6))
    with pytest.raises(at.ConsistencyError):
        at.intersection_numbers(bogus, full_check=True)


def test_verify_ast_agrees_with_naive_checker_on_random_partitions():
    # differential fuzz: random colorings of the all-distinct triples into
    # up to three classes, verdicts compared against the independent
    # brute-force checker (condition numbering may differ; validity not)
    rng = random.Random(60901)
    for nu, rounds in ((3, 200), (4, 120)):
        ground = at.GroundSet(nu)
        trivial = at.trivial_relations(ground)
        distinct = [t for t in product(range(nu), repeat=3)
                    if len(set(t)) == 3]
        agreements = {True: 0, False: 0}
        for _ in range(rounds):
            n_classes = rng.randrange(1, 4)
            coloring = [rng.randrange(n_classes) for _ in distinct]
            groups = {}
            for t, c in zip(distinct, coloring):
                groups.setdefault(c, []).append(t)
            classes = tuple(trivial) + tuple(
                at.TernaryRelation(ground, tuple(g))
                for g in (groups[c] for c in sorted(groups)))
            verdict = at.verify_ast(at.TriplePartition(ground, classes))
            ok, _reason = naive_is_ast(
                nu, [rel.triple_set for rel in classes])
            assert isinstance(verdict, at.AstScheme) == ok
            agreements[ok] += 1
        assert agreements[True] + agreements[False] == rounds
        # the single-class coloring always appears, so both verdicts occur
        single = tuple(trivial) + (at.TernaryRelation(ground, tuple(distinct)),)
        assert isinstance(
            at.verify_ast(at.TriplePartition(ground, single)), at.AstScheme)


def test_full_check_default_matches_explicit(three_point):
    assert at.intersection_numbers(three_point).values == \
        at.intersection_numbers(three_point, full_check=True).values
    assert at.intersection_numbers(three_point, full_check=False).values == \
        three_point.tensor.values
