import random
from fractions import Fraction

import pytest

from relaxforge.errors import (
    InfeasibleFlowerError,
    IrrationalGramError,
    SpaceMismatchError,
)
from relaxforge.scalar import Scalar
from relaxforge.space import (
    InnerProductSpace,
    TensorProductSpace,
    Vec,
    flower_space,
    gram_of,
    inner,
    norm2,
)
from relaxforge.symmatrix import SymMatrixQ


def test_orthonormal_units():
    sp = InnerProductSpace()
    e = sp.add_units("e", range(3))
    assert inner(Vec.of_atom(sp, e[0]), Vec.of_atom(sp, e[0])) == Scalar.rational(1)
    assert not inner(Vec.of_atom(sp, e[0]), Vec.of_atom(sp, e[1]))


def test_flower_boundary_sums_to_zero():
    _, fam, atoms = flower_space(3, 1, Fraction(-1, 2))
    assert fam.sums_to_zero
    sp, fam2, _ = flower_space(2, 1, 1)
    assert not fam2.sums_to_zero
    with pytest.raises(InfeasibleFlowerError) as err:
        flower_space(3, 1, -1)
    assert "b >= -a/(d-1)" in str(err.value)
    with pytest.raises(InfeasibleFlowerError):
        flower_space(4, 1, 2)


def test_flower_member_against_total_at_boundary():
    for d in (2, 3, 5):
        sp, fam, atoms = flower_space(d, 1, Fraction(-1, d - 1))
        total = Vec.combination(sp, [(a, 1) for a in atoms])
        for a in atoms:
            assert not inner(Vec.of_atom(sp, a), total)
        assert not norm2(total)


def test_tensor_of_flower_atoms():
    sp = InnerProductSpace()
    sp.add_flower("r", 3, 1, Fraction(-1, 2))
    sp.add_flower("s", 3, 1, Fraction(-1, 2))
    sp.add_tensor("rs", "r", "s")
    a = Vec.of_atom(sp, sp.atom("rs", (0, 0)))
    b = Vec.of_atom(sp, sp.atom("rs", (1, 0)))
    assert inner(a, b) == Scalar.rational(Fraction(-1, 2))
    assert inner(a, a) == Scalar.rational(1)


def test_bilinear_expansion():
    sp = InnerProductSpace()
    psi = sp.add_unit("psi")
    phi = sp.add_unit("phi")
    half = Fraction(1, 2)
    amp = Scalar.sqrt(Fraction(1, 8))  # sqrt(2)/4
    u = Vec.combination(sp, [(psi, half), (phi, amp)])
    v = Vec.combination(sp, [(psi, half), (phi, -amp)])
    assert inner(u, v) == Scalar.rational(Fraction(1, 8))


def test_gram_of_orthonormal_is_identity():
    sp = InnerProductSpace()
    e = sp.add_units("e", range(2))
    g = gram_of([Vec.of_atom(sp, a) for a in e])
    assert g == SymMatrixQ.identity(2)


def test_gram_of_surd_combination():
    sp = InnerProductSpace()
    psi = sp.add_unit("psi")
    phi = sp.add_unit("phi")
    v = Vec.combination(sp, [(psi, 1), (phi, Scalar.sqrt(2))])
    assert gram_of([v]) == SymMatrixQ([[3]])


def test_gram_irrational_entry_names_pair():
    sp = InnerProductSpace()
    psi = sp.add_unit("psi")
    phi = sp.add_unit("phi")
    u = Vec.of_atom(sp, psi)
    v = Vec.combination(sp, [(psi, Scalar.sqrt(2))])
    with pytest.raises(IrrationalGramError) as err:
        gram_of([u, v])
    assert err.value.pair == (1, 0)


def test_space_mismatch():
    sp1, sp2 = InnerProductSpace(), InnerProductSpace()
    a = Vec.of_atom(sp1, sp1.add_unit("a"))
    b = Vec.of_atom(sp2, sp2.add_unit("b"))
    with pytest.raises(SpaceMismatchError):
        inner(a, b)
    with pytest.raises(SpaceMismatchError):
        a + b


def test_tensor_product_rule_random_atoms():
    rng = random.Random(11)
    sp = InnerProductSpace()
    sp.add_flower("r", 4, 2, Fraction(1, 3))
    sp.add_flower("s", 3, Fraction(5, 4), Fraction(-1, 2))
    sp.add_tensor("rs", "r", "s")
    for _ in range(50):
        i, ip = rng.randrange(4), rng.randrange(4)
        j, jp = rng.randrange(3), rng.randrange(3)
        lhs = inner(
            Vec.of_atom(sp, sp.atom("rs", (i, j))),
            Vec.of_atom(sp, sp.atom("rs", (ip, jp))),
        )
        rhs = inner(
            Vec.of_atom(sp, sp.atom("r", i)), Vec.of_atom(sp, sp.atom("r", ip))
        ) * inner(Vec.of_atom(sp, sp.atom("s", j)), Vec.of_atom(sp, sp.atom("s", jp)))
        assert lhs == rhs


def test_scaled_tensor_gram():
    sp = InnerProductSpace()
    sp.add_flower("r", 2, Fraction(1, 4), Fraction(-1, 4))
    sp.add_flower("s", 2, Fraction(1, 4), Fraction(-1, 4))
    sp.add_tensor("rs", "r", "s", scale=4)
    a = Vec.of_atom(sp, sp.atom("rs", (0, 0)))
    assert norm2(a) == Scalar.rational(Fraction(1, 4))


def test_whole_space_tensor():
    s1, s2 = InnerProductSpace("s1"), InnerProductSpace("s2")
    e = s1.add_units("e", range(2))
    f = s2.add_units("f", range(2))
    t = TensorProductSpace(s1, s2)
    u = t.tensor_vec(
        Vec.combination(s1, [(e[0], 1), (e[1], 1)]), Vec.of_atom(s2, f[0])
    )
    v = t.tensor_vec(Vec.of_atom(s1, e[0]), Vec.of_atom(s2, f[0]))
    assert inner(u, v) == Scalar.rational(1)
    assert norm2(u) == Scalar.rational(2)
    w = t.tensor_vec(Vec.of_atom(s1, e[0]), Vec.of_atom(s2, f[1]))
    assert not inner(v, w)


def test_distinct_families_orthogonal():
    sp = InnerProductSpace()
    psi = sp.add_unit("psi")
    sp.add_flower("phi", 3, 1, Fraction(-1, 2))
    assert not inner(Vec.of_atom(sp, psi), Vec.of_atom(sp, sp.atom("phi", 0)))
