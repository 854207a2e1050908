import random

import pytest

from nfg.contraction import exterior_brute, exterior_planned
from nfg.diagrams import (
    check_cross_chain,
    check_eps_contraction,
    check_fig10,
    check_fig11a,
    check_fig11b,
    check_prop1,
    check_triple_product,
    cross_diagram,
    cross_oracle,
    det_cofactor,
    det_diagram,
    det_oracle,
    dot_oracle,
    matmul_oracle,
    matrix_cycle_diagram,
    pfaffian_diagram,
    pfaffian_factor,
    pfaffian_oracle,
    trace_diagram,
    trace_oracle,
    transpose,
)
from nfg.graph import NfgError
from nfg.scalars import rat
from nfg.suites import rand_mat, rand_skew, rand_vec
from nfg.tensor import Tensor


def test_trace_diagram():
    rng = random.Random(0)
    a = rand_mat(rng, 4, 4)
    assert exterior_brute(trace_diagram(a)).get(()) == trace_oracle(a)


def test_trace_cyclic():
    rng = random.Random(1)
    a, b = rand_mat(rng, 3, 3), rand_mat(rng, 3, 3)
    assert trace_oracle(matmul_oracle(a, b)) == trace_oracle(matmul_oracle(b, a))
    g = matrix_cycle_diagram([(a, False), (b, False)])
    assert exterior_brute(g).get(()) == trace_oracle(matmul_oracle(a, b))


def test_cross_diagram_matches_oracle():
    u = Tensor.from_values((3,), [1, 2, 3])
    v = Tensor.from_values((3,), [4, 5, 6])
    z = exterior_brute(cross_diagram(u, v))
    assert z.equal(cross_oracle(u, v))
    assert [z.get((i,)) for i in range(3)] == [rat(-3), rat(6), rat(-3)]


def test_cross_anticommutes():
    rng = random.Random(2)
    u, v = rand_vec(rng), rand_vec(rng)
    assert cross_oracle(u, v).equal(cross_oracle(v, u).neg())
    assert dot_oracle(cross_oracle(u, v), u) == rat(0)


def test_eps_contraction_identity():
    assert check_eps_contraction().equal


def test_cross_chain_six_way():
    rng = random.Random(3)
    for _ in range(5):
        u, v, s, w = (rand_vec(rng) for _ in range(4))
        assert check_cross_chain(u, v, s, w).equal


def test_fig10_identity():
    rng = random.Random(4)
    a, d = rand_mat(rng, 3, 2), rand_mat(rng, 3, 2)
    b, c = rand_mat(rng, 3, 3), rand_mat(rng, 3, 3)
    assert check_fig10(a, b, c, d).equal


def test_fig11a_identity():
    rng = random.Random(5)
    a, b = rand_mat(rng, 3, 2), rand_mat(rng, 3, 2)
    c, d = rand_mat(rng, 3, 4), rand_mat(rng, 3, 4)
    assert check_fig11a(a, b, c, d).equal


def test_fig11b_identity():
    rng = random.Random(6)
    a1 = rand_vec(rng)
    b, c = rand_mat(rng, 3, 4), rand_mat(rng, 3, 4)
    assert check_fig11b(a1, b, c).equal


def test_report_line_format():
    rng = random.Random(7)
    rep = check_fig11a(rand_mat(rng, 3, 2), rand_mat(rng, 3, 2),
                       rand_mat(rng, 3, 2), rand_mat(rng, 3, 2))
    line = rep.line()
    assert rep.name in line
    assert "PASS" in line


def test_det_diagram_matches_oracles():
    rng = random.Random(8)
    for n in range(1, 5):
        a = rand_mat(rng, n, n)
        d = exterior_brute(det_diagram(a)).get(())
        assert d == det_oracle(a)
        assert d == det_cofactor(a)


def test_det_multiplicative_and_transpose():
    rng = random.Random(9)
    a, b = rand_mat(rng, 4, 4), rand_mat(rng, 4, 4)
    assert det_oracle(matmul_oracle(a, b)) == det_oracle(a) * det_oracle(b)
    assert det_oracle(transpose(a)) == det_oracle(a)


def test_triple_product():
    rng = random.Random(10)
    a1, a2, a3 = rand_vec(rng), rand_vec(rng), rand_vec(rng)
    assert check_triple_product(a1, a2, a3).equal


def test_pfaffian_small_cases():
    # Pf of [[0, a], [-a, 0]] is a
    a = Tensor.from_values((2, 2), [0, rat(5, 3), rat(-5, 3), 0])
    assert pfaffian_oracle(a) == rat(5, 3)
    s = Tensor.from_values(
        (4, 4),
        [0, 1, 2, 3,
         -1, 0, 4, 5,
         -2, -4, 0, 6,
         -3, -5, -6, 0])
    # Pf = a12*a34 - a13*a24 + a14*a23
    assert pfaffian_oracle(s) == rat(1 * 6 - 2 * 5 + 3 * 4)


def test_pfaffian_square_is_det():
    rng = random.Random(11)
    for dim in (2, 4, 6):
        s = rand_skew(rng, dim)
        assert pfaffian_oracle(s) ** 2 == det_oracle(s)


def test_pfaffian_factor():
    assert pfaffian_factor(1) == 2
    assert pfaffian_factor(2) == 8
    assert pfaffian_factor(3) == 48


def test_prop1_diagram_value():
    rng = random.Random(12)
    s = rand_skew(rng, 4)
    g = pfaffian_diagram(s)
    z = exterior_planned(g).get(())
    assert z == pfaffian_factor(2) * pfaffian_oracle(s)
    assert check_prop1(s, engine="brute").equal
    assert check_prop1(s, engine="planned").equal


def test_pfaffian_rejects_non_skew():
    a = Tensor.from_values((2, 2), [1, 2, 3, 4])
    with pytest.raises(NfgError):
        pfaffian_diagram(a)
    with pytest.raises(NfgError):
        pfaffian_oracle(a)


def test_pfaffian_rejects_odd_dim():
    a = Tensor.from_values((3, 3), [0, 1, 2, -1, 0, 3, -2, -3, 0])
    with pytest.raises(NfgError):
        pfaffian_diagram(a)
