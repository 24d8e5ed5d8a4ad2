import random
from fractions import Fraction

import pytest

from relaxforge.conic import relax, verify_primal
from relaxforge.formulas import (
    circuit_assignment,
    eval_formula,
    formula_structure,
    formula_vars,
    hqfp_embedding,
    is_alternating,
    normalize_alternating,
    parse_formula,
    protocol_from_formula,
    push_negations,
)
from relaxforge.gamma2 import protocol_hqfp, verify_gamma2


def test_parse_and_eval():
    f = parse_formula("(x1 & x2) | (x1 & x3)")
    assert formula_vars(f) == 3
    assert eval_formula(f, "110") == 1
    assert eval_formula(f, "011") == 0
    assert eval_formula(f, "101") == 1
    g = parse_formula("~x1 & 1")
    assert eval_formula(g, "0") == 1
    assert eval_formula(g, "1") == 0


def test_parse_precedence():
    f = parse_formula("x1 | x2 & x3")
    assert f == ("or", ("lit", 1), ("and", ("lit", 2), ("lit", 3)))


def test_push_negations_de_morgan():
    f = parse_formula("~(x1 & ~x2)")
    g = push_negations(f)
    assert g == ("or", ("lit", -1), ("lit", 2))
    for x in ("00", "01", "10", "11"):
        assert eval_formula(f, x) == eval_formula(g, x)


def test_normalize_alternating_preserves_semantics():
    rng = random.Random(47)

    def random_formula(depth, nvars):
        if depth == 0 or rng.random() < 0.25:
            roll = rng.random()
            if roll < 0.1:
                return ("const", rng.randint(0, 1))
            i = rng.randint(1, nvars)
            return ("lit", i if rng.random() < 0.7 else -i)
        gate = rng.choice(["and", "or"])
        f = (gate, random_formula(depth - 1, nvars), random_formula(depth - 1, nvars))
        return ("not", f) if rng.random() < 0.2 else f

    for _ in range(40):
        f = random_formula(3, 3)
        g = normalize_alternating(f)
        assert is_alternating(g)
        for v in range(8):
            x = format(v, "03b")
            assert eval_formula(f, x) == eval_formula(g, x)


def test_circuit_assignment_gate_equations():
    f = parse_formula("(x1 & x2) | (x1 & x3)")
    inputs = [format(v, "03b") for v in range(8)]
    assignment = circuit_assignment(f, inputs)
    for x in inputs:
        assert assignment.value((), x) == eval_formula(f, x)


def test_single_literal_formula():
    result = protocol_from_formula("x1")
    assert verify_gamma2(result.protocol, result.relation).ok
    assert result.relation.xs == ("1",)
    assert result.relation.ys == ("0",)
    assert result.protocol.structure.round_depth() == 1


def test_and_two_variables():
    result = protocol_from_formula("x1 & x2")
    assert verify_gamma2(result.protocol, result.relation).ok
    st = result.structure
    assert st.owner(()) == "B"
    # Bob walks to the left child exactly when it evaluates to 0 on his input
    for y in result.relation.ys:
        out0 = result.assignment.value((0,), y)
        assert result.values_b[((0,), y)] == (1 - out0)


def test_depth_two_formula_protocol():
    result = protocol_from_formula("(x1 & x2) | (x1 & x3)")
    assert verify_gamma2(result.protocol, result.relation).ok
    assert result.structure.owner(()) == "A"


def test_rank1_embedding_solves_protocol_hqfp():
    for text in ["x1 & x2", "(x1 & x2) | (x1 & x3)", "x1 | x2"]:
        result, solution = hqfp_embedding(text)
        problem = protocol_hqfp(result.relation, result.structure)
        assert verify_primal(problem, solution).ok


def test_rank1_embedding_lifts_to_relaxation():
    from relaxforge.gamma2 import gamma2_primal_solution

    result, solution = hqfp_embedding("x1 & x2")
    problem = relax(protocol_hqfp(result.relation, result.structure))
    report = verify_primal(problem, gamma2_primal_solution(result.protocol))
    assert report.ok


def test_constant_formula_rejected():
    with pytest.raises(ValueError):
        protocol_from_formula("x1 | ~x1")


def test_non_alternating_input_normalized():
    result = protocol_from_formula("x1 & (x2 & x3)")
    assert verify_gamma2(result.protocol, result.relation).ok
    assert is_alternating(result.assignment.formula)
