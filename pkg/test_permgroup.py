from fractions import Fraction

import pytest
from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics import PermutationGroup

from rackgeom.core.errors import GroupTooLarge, InvalidArgument, NotGenerating, NotNormallyGenerating
from rackgeom.services.permgroup_service import (
    compose,
    conjugate,
    from_cycles,
    identity,
    invert,
    perm_order,
    permgroup_service,
    to_cycles,
)
from rackgeom.services.rack_service import rack_service


def sympy_order(degree, generators):
    return PermutationGroup([SymPermutation(list(g)) for g in generators]).order()


# === Permutation helpers ===


def test_cycle_notation_round_trip():
    p = from_cycles("(0 1 2)(3 4)", 5)
    assert p == (1, 2, 0, 4, 3)
    assert to_cycles(p) == "(0 1 2)(3 4)"
    assert from_cycles("()", 3) == identity(3)
    assert to_cycles(identity(4)) == "()"


@pytest.mark.parametrize("text", ["(0 1", "(0 5)", "(0 1)(1 2)", "0 1"])
def test_cycle_notation_rejects_malformed(text):
    with pytest.raises(ValueError):
        from_cycles(text, 3)


def test_compose_applies_right_factor_first():
    a = from_cycles("(0 1)", 3)
    b = from_cycles("(1 2)", 3)
    # b sends 1 -> 2, then a fixes 2
    assert compose(a, b)[1] == 2
    assert compose(a, invert(a)) == identity(3)
    assert perm_order(from_cycles("(0 1 2)(3 4)", 5)) == 6
    assert conjugate(b, a) == from_cycles("(0 2)", 3)


# === Enumeration ===


@pytest.mark.parametrize(
    "degree, cycles",
    [
        (3, ["(0 1)", "(0 1 2)"]),
        (4, ["(0 1 2 3)", "(1 3)"]),
        (4, ["(0 1)", "(0 1 2 3)"]),
        (5, ["(0 1 2)", "(2 3 4)"]),
        (6, ["(0 1 2 3 4 5)"]),
    ],
)
def test_order_matches_sympy(degree, cycles):
    generators = [from_cycles(c, degree) for c in cycles]
    group = permgroup_service.generate(degree, generators)
    assert group.order == sympy_order(degree, generators)


def test_witnesses_evaluate_to_elements():
    generators = [from_cycles("(0 1)", 4), from_cycles("(0 1 2 3)", 4)]
    group = permgroup_service.generate(4, generators)
    for g, word in zip(group.elements, group.witnesses):
        assert permgroup_service.evaluate_word(group, word) == g


def test_group_cap():
    generators = [from_cycles("(0 1)", 5), from_cycles("(0 1 2 3 4)", 5)]
    with pytest.raises(GroupTooLarge):
        permgroup_service.generate(5, generators, cap=100)


def test_generate_rejects_non_permutation():
    with pytest.raises(InvalidArgument):
        permgroup_service.generate(3, [(0, 0, 1)])


def test_inner_groups():
    assert permgroup_service.inner_group(rack_service.dihedral(3)).order == 6
    assert permgroup_service.inner_group(rack_service.trivial(3)).order == 1
    assert permgroup_service.inner_group(rack_service.cyclic(5)).order == 5


def test_inner_group_witness_labels_are_rack_elements():
    rack = rack_service.dihedral(4)
    group = permgroup_service.inner_group(rack)
    for g in group.elements:
        product = identity(rack.size)
        for x in group.witness_labels(g):
            product = compose(product, rack.psi(x))
        assert product == g


# === Subgroups, norms, cosets ===


def test_subgroups_and_cosets(s3):
    h = permgroup_service.subgroup(s3, [from_cycles("(0 1)", 3)])
    assert h.order == 2
    representatives, coset_of = permgroup_service.left_cosets(s3, h)
    assert len(representatives) == 3
    assert representatives[0] == identity(3)
    assert len(coset_of) == 6
    assert permgroup_service.stabilizer(s3, 2).order == 2
    assert permgroup_service.centralizer(s3, from_cycles("(0 1)", 3)).order == 2
    assert permgroup_service.centralizer(s3, from_cycles("(0 1 2)", 3)).order == 3


def test_conjugation_closure(s3):
    closure = permgroup_service.conjugation_closure([from_cycles("(0 1)", 3)], s3)
    assert len(closure) == 3
    assert permgroup_service.conjugation_closed(closure, s3)
    assert not permgroup_service.conjugation_closed([from_cycles("(0 1)", 3)], s3)


def test_transposition_norm_on_s3(s3):
    table = permgroup_service.word_norm(s3, [from_cycles("(0 1)", 3)])
    assert table.norm(identity(3)) == 0
    assert table.norm(from_cycles("(1 2)", 3)) == 1
    assert table.norm(from_cycles("(0 1 2)", 3)) == 2
    assert table.diameter == 2


def test_norm_without_conjugation_closure(s3):
    table = permgroup_service.word_norm(
        s3, [from_cycles("(0 1)", 3), from_cycles("(0 1 2)", 3)], conjugation_invariant=False
    )
    assert len(table.generating_set) == 2
    assert table.diameter == 2


def test_norm_requires_generation(s3):
    with pytest.raises(NotGenerating):
        permgroup_service.word_norm(s3, [from_cycles("(0 1 2)", 3)])
    h = permgroup_service.subgroup(s3, [])
    with pytest.raises(NotNormallyGenerating):
        permgroup_service.quotient_metric(s3, [from_cycles("(0 1 2)", 3)], h)


def test_quotient_metric_on_s3(s3):
    s = from_cycles("(0 1)", 3)
    h = permgroup_service.subgroup(s3, [s])
    metric = permgroup_service.quotient_metric(s3, [s], h)
    assert metric.matrix == ((0, 1, 1), (1, 0, 1), (1, 1, 0))
    assert metric.diameter == 1


def test_uniform_mean(s3):
    assert permgroup_service.uniform_mean(s3, lambda g: 1 if g[0] == 0 else 0) == Fraction(1, 3)
    assert permgroup_service.uniform_mean(s3, lambda g: 5) == 5


# === Norm, quotient metric and mean invariants ===


@pytest.mark.parametrize(
    "rack, diameter",
    [(rack_service.dihedral(3), 2), (rack_service.cyclic(5), 2), (rack_service.trivial(3), 0)],
)
def test_inner_group_norm_diameters(rack, diameter):
    group = permgroup_service.inner_group(rack)
    table = permgroup_service.word_norm(group, [rack.psi(x) for x in rack.elements])
    assert table.diameter == diameter


def test_psi_set_is_conjugation_closed():
    rack = rack_service.dihedral(3)
    group = permgroup_service.inner_group(rack)
    assert permgroup_service.conjugation_closed([rack.psi(x) for x in rack.elements], group)


@pytest.mark.parametrize("name", ["dihedral(3)", "dihedral(4)", "dihedral(5)", "cyclic(6)", "conj(S3)"])
def test_norm_axioms(name, suite):
    rack = suite[name]
    group = permgroup_service.inner_group(rack)
    table = permgroup_service.word_norm(group, [rack.psi(x) for x in rack.elements])
    assert table.norm(group.elements[0]) == 0
    for g in group.elements:
        assert table.norm(invert(g)) == table.norm(g)
        for h in group.elements:
            assert table.norm(compose(compose(h, g), invert(h))) == table.norm(g)
            assert table.norm(compose(g, h)) <= table.norm(g) + table.norm(h)


@pytest.mark.parametrize("subgroup_cycles", [["(0 1)"], []])
def test_quotient_metric_is_left_invariant(s3, subgroup_cycles):
    s = from_cycles("(0 1)", 3)
    h = permgroup_service.subgroup(s3, [from_cycles(c, 3) for c in subgroup_cycles])
    metric = permgroup_service.quotient_metric(s3, [s], h)
    _, coset_of = permgroup_service.left_cosets(s3, h)
    reps = metric.representatives
    for g in s3.elements:
        for i, x in enumerate(reps):
            for j, y in enumerate(reps):
                moved = metric.matrix[coset_of[compose(g, x)]][coset_of[compose(g, y)]]
                assert moved == metric.matrix[i][j]


def test_uniform_mean_is_bi_invariant(s3, rng):
    values = {g: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for g in s3.elements}
    mean = permgroup_service.uniform_mean(s3, values.__getitem__)
    for h in s3.elements:
        assert permgroup_service.uniform_mean(s3, lambda g: values[compose(h, g)]) == mean
        assert permgroup_service.uniform_mean(s3, lambda g: values[compose(g, h)]) == mean
