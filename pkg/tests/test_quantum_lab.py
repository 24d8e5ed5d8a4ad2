import random
from fractions import Fraction

import pytest

from relaxforge.errors import NoGuaranteeError
from relaxforge.prototree import binary_structure
from relaxforge.qphp import classical_family, max_overlap, tight_example
from relaxforge.quantum_lab import (
    classical_qlab_embedding,
    extract_measurement,
    graph_relation,
    level_normalization,
    two_round_violation,
    universal_protocol,
    universal_protocol_for,
    verify_qlab,
)
from relaxforge.relations import PairTable, bitstring
from relaxforge.scalar import Scalar
from relaxforge.space import Vec, inner


def relation_of(table: PairTable):
    xs = tuple(bitstring(i, table.n) for i in range(1 << table.n))
    return graph_relation(
        xs, xs, lambda x, y: table.value(int(x, 2), int(y, 2)), name="graph"
    )


def test_depth3_state_norm():
    table = PairTable.from_hex("a1b2", 2)
    protocol = universal_protocol(table)
    for x in protocol.xs[:2]:
        for y in protocol.ys[:2]:
            s = protocol.state((0, 0, 0), x, y)
            assert inner(s, s) == Scalar.rational(Fraction(1, 8))


def test_depth3_cross_inputs_orthogonal_when_values_differ():
    table = PairTable.from_hex("a1b2", 2)
    protocol = universal_protocol(table)
    y = protocol.ys[0]
    for x in protocol.xs:
        for xp in protocol.xs:
            if table.value(int(x, 2), int(y, 2)) != table.value(int(xp, 2), int(y, 2)):
                assert not inner(
                    protocol.state((0, 0, 0), x, y), protocol.state((0, 0, 0), xp, y)
                )


def test_depth3_level_mass_decomposes_unit():
    table = PairTable.from_hex("ffff", 2)
    protocol = universal_protocol(table)
    x, y = protocol.xs[1], protocol.ys[2]
    total = Scalar.rational(0)
    for b1 in (0, 1):
        for b2 in (0, 1):
            for b3 in (0, 1):
                s = protocol.state((b1, b2, b3), x, y)
                total = total + inner(s, s)
    assert total == Scalar.rational(1)


@pytest.mark.parametrize("hex_table", ["a1b2", "0001", "8000", "6996", "00ff"])
def test_universal_protocol_verifies(hex_table):
    table = PairTable.from_hex(hex_table, 2)
    protocol = universal_protocol(table)
    report = verify_qlab(protocol, relation_of(table))
    assert report.ok, report.summary()
    assert level_normalization(protocol)


def test_universal_surviving_leaf_matches_function():
    table = PairTable.from_hex("a1b2", 2)
    protocol = universal_protocol(table)
    for x in protocol.xs:
        for y in protocol.ys:
            want = table.value(int(x, 2), int(y, 2))
            for b1 in (0, 1):
                for b2 in (0, 1):
                    for b3 in (0, 1):
                        for z in (0, 1):
                            s = protocol.state((b1, b2, b3, z), x, y)
                            assert s.is_zero() == (z != want)


def test_universal_1x1_and_sampled_tables():
    rng = random.Random(53)
    for _ in range(25):
        table = PairTable.from_int(rng.randrange(1 << 16), 2)
        protocol = universal_protocol(table)
        assert verify_qlab(protocol, relation_of(table)).ok


def test_universal_sign_flip_rejected():
    table = PairTable.from_hex("a1b2", 2)
    protocol = universal_protocol(table)
    # flip the final-register sign of one depth-3 state: it now equals the
    # sibling branch state, breaking Alice's cross-input orthogonality
    x, y = protocol.xs[0], protocol.ys[0]
    flipped = protocol.state((0, 0, 0), x, y)
    protocol.psi[((0, 0, 1), x, y)] = flipped
    report = verify_qlab(protocol, relation_of(table))
    assert not report.ok
    assert any(v.kind == "cross-orthogonality" and v.where.startswith("A") for v in report.violations)


def test_classical_embedding_verifies():
    # Alice announces her bit, Bob announces x & y; output is the last bit
    xs = ys = ("0", "1")
    structure = binary_structure("AB")

    def indicator(t, x, y):
        if len(t) >= 1 and t[0] != int(x):
            return False
        if len(t) >= 2 and t[1] != (int(x) & int(y)):
            return False
        return True

    protocol = classical_qlab_embedding(structure, xs, ys, indicator)
    relation = graph_relation(xs, ys, lambda x, y: int(x) & int(y), "AND")
    assert verify_qlab(protocol, relation).ok
    # the speaking player's state follows one branch: a single ray, other empty
    pair = extract_measurement(protocol, (), "1")
    assert (len(pair.basis0), len(pair.basis1)) == (0, 1)
    pair = extract_measurement(protocol, (), "0")
    assert (len(pair.basis0), len(pair.basis1)) == (1, 0)


def test_extract_measurement_universal():
    table = PairTable.from_hex("a1b2", 2)
    protocol = universal_protocol(table)
    pair = extract_measurement(protocol, (), protocol.ys[0])
    assert pair.basis0 and pair.basis1
    for u in pair.basis0:
        for v in pair.basis1:
            assert not inner(u, v)
    deep = extract_measurement(protocol, (1, 0, 1), protocol.ys[2])
    for u in deep.basis0:
        for v in deep.basis1:
            assert not inner(u, v)


def test_extract_measurement_all_nodes_sampled():
    table = PairTable.from_hex("37c8", 2)
    protocol = universal_protocol(table)
    st = protocol.structure
    for t in st.internal_nodes():
        inputs = protocol.xs if st.owner(t) == "A" else protocol.ys
        for value in inputs:
            extract_measurement(protocol, t, value)


def test_two_round_classical_prefix():
    # Alice sends her first bit: four inputs, two messages
    fam = classical_family(4, 2, [0, 0, 1, 1])
    witness = two_round_violation(fam, k=1)
    assert witness.overlap == 1


def test_two_round_tight_decomposition():
    fam = tight_example(3, 2, 1)
    witness = two_round_violation(fam, k=1)
    assert witness.overlap == Fraction(1, 8)
    assert witness.overlap == max_overlap(fam)[0]


def test_two_round_no_guarantee():
    fam = classical_family(2, 2, [0, 1])
    with pytest.raises(NoGuaranteeError):
        two_round_violation(fam, k=1)
