from fractions import Fraction

import pytest

from iskk import crossed as cr
from iskk import galgebra as ga
from iskk import semigroup as sg
from iskk.errors import NonIntegralMultiplicity
from iskk.linalg import ONE, ZERO, identity


def test_group_algebra_z2():
    s = sg.parse_builder("cyclic:2")
    x = cr.crossed(ga.trivial_algebra(s), kind="universal")
    assert x.dim == 2
    d = cr.semisimple_quotient(x)
    assert d.radical_dim == 0 and d.blocks == 2 and d.splits


def test_chain_universal_vs_sieben():
    s = sg.parse_builder("chain:2")
    a = ga.trivial_algebra(s)
    uni = cr.crossed(a, kind="universal")
    tight = cr.crossed(a, kind="sieben")
    assert uni.dim == 2
    assert tight.dim == 1
    assert cr.semisimple_quotient(uni).blocks == 2
    assert cr.semisimple_quotient(tight).blocks == 1


def test_sieben_equals_universal_iff_trivial_idempotents():
    for spec, equal in [("cyclic:3", True), ("symmetric:3", True), ("chain:3", False),
                        ("diamond", False)]:
        s = sg.parse_builder(spec)
        a = ga.trivial_algebra(s)
        uni = cr.crossed(a, kind="universal")
        tight = cr.crossed(a, kind="sieben")
        assert tight.dim <= uni.dim
        assert (tight.dim == uni.dim) == equal, spec


def test_universal_dim_formula():
    for spec in ["chain:3", "diamond", "brandt_unital:2", "symmetric_inverse:2"]:
        s = sg.parse_builder(spec)
        c = ga.c0x_algebra(s)
        x = cr.crossed(c, kind="universal")
        expected = 0
        for g in s.elements():
            m = c.action[s.range_of(g)]
            expected += sum(1 for i in range(c.dim) if m[i][i] == 1)
        assert x.dim == expected


def test_semigroup_algebra_of_i2_blocks():
    # the monoid algebra of partial injections on two points:
    # one block per rank-0 and rank-2-sign pair plus the 2x2 block
    s = sg.parse_builder("symmetric_inverse:2")
    x = cr.crossed(ga.trivial_algebra(s), kind="universal")
    assert x.dim == 7
    d = cr.semisimple_quotient(x)
    assert d.radical_dim == 0
    assert d.blocks == 4
    assert sorted(d.block_dims) == [1, 1, 1, 2]


def test_semigroup_algebra_of_i3_blocks():
    s = sg.parse_builder("symmetric_inverse:3")
    x = cr.crossed(ga.trivial_algebra(s), kind="universal")
    assert x.dim == 34
    d = cr.semisimple_quotient(x)
    assert d.blocks == 7
    assert sorted(d.block_dims) == [1, 1, 1, 1, 2, 3, 3]


def test_matrix_algebra_single_block():
    d = cr.semisimple_quotient(ga.matrix_algebra(2))
    assert d.radical_dim == 0 and d.blocks == 1 and d.block_dims == [2]


def test_z3_center_does_not_split_with_witness():
    s = sg.parse_builder("cyclic:3")
    x = cr.crossed(ga.trivial_algebra(s), kind="universal")
    d = cr.semisimple_quotient(x)
    assert d.blocks == 3 and not d.splits
    assert d.witness_poly is not None and "x**2 + x + 1" in d.witness_poly
    assert d.method == "numeric"


def test_s3_group_algebra():
    s = sg.parse_builder("symmetric:3")
    d = cr.semisimple_quotient(cr.crossed(ga.trivial_algebra(s), kind="universal"))
    assert d.blocks == 3
    assert sorted(d.block_dims) == [1, 1, 2]
    assert d.splits


def test_known_irreducible_counts():
    for spec, blocks in [("cyclic:2", 2), ("cyclic:3", 3), ("symmetric:3", 3)]:
        s = sg.parse_builder(spec)
        d = cr.semisimple_quotient(cr.crossed(ga.trivial_algebra(s), kind="universal"))
        assert d.blocks == blocks, spec


def test_radical_of_triangular_algebra():
    # span{e11, e22, e12} upper triangular: one-dimensional radical
    mul = {
        (0, 0): {0: ONE}, (1, 1): {1: ONE},
        (0, 2): {2: ONE}, (2, 1): {2: ONE},
    }
    star = identity(3)
    alg = ga.StarAlgebra(3, mul, star, "upper")
    d = cr.semisimple_quotient(alg)
    assert d.radical_dim == 1
    assert d.quotient_dim == 2 and d.blocks == 2
    # idempotence: the quotient has zero radical
    d2 = cr.semisimple_quotient(d.quotient)
    assert d2.radical_dim == 0 and d2.blocks == 2


def test_groupoid_crossed_product():
    from iskk.induction import assoc_groupoid

    s = sg.parse_builder("brandt_unital:2")
    h = assoc_groupoid(s, sg.idempotents(s))
    cx = ga.c0_units(h)
    x = cr.crossed(cx, kind="groupoid")
    assert x.dim == len(h.elements)
    d = cr.semisimple_quotient(x)
    assert d.blocks == len(h.units)


def test_groupoid_crossed_one_unit_group():
    from iskk.induction import assoc_groupoid

    s = sg.parse_builder("symmetric_inverse:2")
    tau = s.index("[1>2,2>1]")
    h = assoc_groupoid(s, sg.generate(s, sg.bit(tau)))
    line = ga.trivial_line(h, 0)
    x = cr.crossed(line, kind="groupoid")
    assert x.dim == 2  # the group algebra of the isotropy
    assert cr.semisimple_quotient(x).blocks == 2


def test_numeric_oracle_agreement():
    for spec in ["cyclic:2", "cyclic:3", "chain:3", "diamond", "symmetric:3",
                 "symmetric_inverse:2"]:
        s = sg.parse_builder(spec)
        x = cr.crossed(ga.trivial_algebra(s), kind="universal")
        d = cr.semisimple_quotient(x)
        oracle = cr.numeric_block_oracle(x, seed=7)
        assert oracle["certified"], (spec, oracle)
        assert oracle["blocks"] == d.blocks, spec


def test_center_info():
    s = sg.parse_builder("chain:4")
    info = cr.center_info(cr.crossed(ga.trivial_algebra(s), kind="universal"))
    assert info["center_dim"] == 4 and info["splits"]
    assert cr.center_dim(cr.crossed(ga.trivial_algebra(s), kind="universal")) == 4
