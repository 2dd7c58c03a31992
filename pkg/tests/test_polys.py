import json

import numpy as np
import pytest

from hagedorn import fixtures
from hagedorn.errors import (
    AsymmetricM,
    AxisOutOfRange,
    SymmetryViolation,
    ZeroOffdiagonal,
)
from hagedorn.frames import random_symmetric_unitary
from hagedorn.polys import (
    MultiIndexPolynomial,
    apply_counting_operator,
    coefficient_distance,
    genfunc_coefficient,
    gradient_lower,
    laguerre,
    laguerre_reduce,
    poly_from_json,
    poly_to_json,
    raise_index,
    tensor_expand,
    ttrr_generate,
    univariate_hermite,
)

RNG = np.random.default_rng(7)


# -- sparse polynomial arithmetic ----------------------------------------------

def test_monomial_and_eval():
    p = MultiIndexPolynomial.monomial(2, (1, 2), 3.0)
    assert p((2.0, 1.0)) == pytest.approx(6.0)
    x = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert np.allclose(p(x), [6.0, 27.0])


def test_arithmetic_and_diff():
    x = MultiIndexPolynomial.monomial(1, (1,), 1.0)
    p = x * x - 2.0 * x + MultiIndexPolynomial.constant(1, 1.0)
    # (x-1)^2
    assert p(np.array([3.0])) == pytest.approx(4.0)
    dp = p.diff(0)
    assert dp(np.array([3.0])) == pytest.approx(4.0)
    assert p.degree() == 2
    assert p.diff(0).diff(0).degree() == 0


def test_univariate_evaluation_shape_convenience():
    h = univariate_hermite(1.0, 3)
    # scalar, 1-d array, and column of points all work
    assert h(0.5) == pytest.approx(8 * 0.5**3 - 12 * 0.5)
    xs = np.linspace(-1, 1, 5)
    assert np.allclose(h(xs), 8 * xs**3 - 12 * xs)


def test_classical_hermite_table():
    # physicists' Hermite polynomials at lambda = 1
    expected = {
        0: {(0,): 1.0},
        1: {(1,): 2.0},
        2: {(2,): 4.0, (0,): -2.0},
        3: {(3,): 8.0, (1,): -12.0},
        4: {(4,): 16.0, (2,): -48.0, (0,): 12.0},
    }
    for n, terms in expected.items():
        h = univariate_hermite(1.0, n)
        assert set(h.terms) == set(terms)
        for k, c in terms.items():
            assert h.terms[k] == pytest.approx(c)


def test_laguerre_values():
    # L_2^(0)(x) = x^2/2 - 2x + 1
    L = laguerre(2, 0)
    xs = np.linspace(0.0, 4.0, 9)
    assert np.allclose(L(xs), xs**2 / 2 - 2 * xs + 1)
    # closed form at the origin: L_n^(a)(0) = C(n+a, n)
    assert laguerre(6, 1)(0.0) == pytest.approx(7.0)


# -- recursion table -------------------------------------------------------------

def test_ttrr_m2_low_order_frozen():
    table = ttrr_generate(fixtures.MATRICES["M2"], (2, 2))
    q11 = table[(1, 1)]
    assert q11.terms == pytest.approx({(1, 1): 4.0, (0, 0): -2.0})
    q10 = table[(1, 0)]
    assert q10.terms == pytest.approx({(1, 0): 2.0})


def test_leading_coefficient_power_of_two():
    M = random_symmetric_unitary(2, RNG)
    table = ttrr_generate(M, (4, 4))
    for k in table.indices():
        assert table[k].coefficient(k) == pytest.approx(2.0 ** sum(k))


def test_table_total_degree_cap():
    table = ttrr_generate(fixtures.MATRICES["M1"], (4, 4), total_degree=5)
    assert (4, 4) not in set(table.indices())
    with pytest.raises(KeyError):
        table[(4, 4)]


def test_asymmetric_matrix_rejected():
    M = np.array([[1.0, 0.5], [0.2, 1.0]])
    with pytest.raises(AsymmetricM):
        ttrr_generate(M, (2, 2))


def test_diagonal_matrix_factorises():
    lam = np.array([0.3 + 0.4j, -1.2 + 0.1j])
    table = ttrr_generate(np.diag(lam), (3, 3))
    pts = RNG.uniform(-1, 1, size=(10, 2))
    for k in table.indices():
        want = univariate_hermite(lam[0], k[0])(pts[:, 0]) * univariate_hermite(
            lam[1], k[1]
        )(pts[:, 1])
        assert np.abs(table[k](pts) - want).max() <= 1e-10 * max(1.0, np.abs(want).max())


# -- oracle routes -----------------------------------------------------------------

@pytest.mark.parametrize("name", ["M1", "M2", "M3"])
def test_genfunc_matches_ttrr(name):
    M = fixtures.MATRICES[name]
    table = ttrr_generate(M, (4, 4), total_degree=5)
    for k in table.indices():
        assert coefficient_distance(table[k], genfunc_coefficient(M, k)) <= 1e-10


def test_tensor_expansion_shared_axes():
    # three coupled axes: every axis belongs to two off-diagonal pairs
    M = random_symmetric_unitary(3, RNG)
    table = ttrr_generate(M, (3, 3, 3), total_degree=6)
    for k in table.indices():
        scale = max(1.0, 2.0 ** sum(k))
        assert coefficient_distance(table[k], tensor_expand(M, k)) <= 1e-10 * scale


def test_laguerre_reduction_m2():
    M = fixtures.MATRICES["M2"]
    table = ttrr_generate(M, (4, 3))
    for k in table.indices():
        if k[0] == 0 or k[1] == 0:
            continue
        assert coefficient_distance(table[k], laguerre_reduce(M, k, 0, 1)) <= 1e-10


def test_laguerre_reduce_guards():
    M = fixtures.MATRICES["M1"]  # identity, no off-diagonal entries
    with pytest.raises(ZeroOffdiagonal):
        laguerre_reduce(M, (1, 1), 0, 1)
    with pytest.raises(AxisOutOfRange):
        laguerre_reduce(fixtures.MATRICES["M2"], (1, 1), 0, 0)


def test_m2_laguerre_closed_form():
    # q_(7,6) for the exchange matrix: 6! 2^7 x1 L^(1)_6(2 x1 x2)
    table = ttrr_generate(fixtures.MATRICES["M2"], (7, 6))
    q = table[(7, 6)]
    L = laguerre(6, 1)
    pts = RNG.uniform(-1.5, 1.5, size=(30, 2))
    want = 720.0 * 2.0**7 * pts[:, 0] * L(2.0 * pts[:, 0] * pts[:, 1])
    assert np.abs(q(pts) - want).max() / 2.0**13 <= 1e-9


# -- ladder structure -------------------------------------------------------------

def test_raising_path_independence():
    M = random_symmetric_unitary(2, RNG)
    q = ttrr_generate(M, (2, 2))[(2, 1)]
    a = raise_index(M, raise_index(M, q, 0), 1)
    b = raise_index(M, raise_index(M, q, 1), 0)
    assert coefficient_distance(a, b) <= 1e-12 * 2.0**5


def test_raising_from_one_builds_table_entry():
    M = random_symmetric_unitary(2, RNG)
    one = MultiIndexPolynomial.constant(2, 1.0)
    q = raise_index(M, raise_index(M, raise_index(M, one, 0), 0), 1)
    table = ttrr_generate(M, (2, 1))
    assert coefficient_distance(q, table[(2, 1)]) <= 1e-12 * 2.0**3


def test_ladder_closure():
    M = random_symmetric_unitary(3, RNG)
    table = ttrr_generate(M, (2, 2, 2), total_degree=4)
    for k in table.indices():
        for j in range(3):
            kj = k[:j] + (k[j] + 1,) + k[j + 1 :]
            back = gradient_lower(raise_index(M, table[k], j), kj, j)
            assert coefficient_distance(back, table[k]) <= 1e-12 * max(1.0, 2.0 ** sum(k))


def test_counting_operator_eigenvector():
    M = fixtures.MATRICES["M3"]
    table = ttrr_generate(M, (3, 3), total_degree=5)
    for k in table.indices():
        for j in range(2):
            lhs = apply_counting_operator(M, table[k], j)
            assert coefficient_distance(lhs, (2 * k[j] + 1.0) * table[k]) <= 1e-11


def test_hermite_rescaling_law():
    xs = RNG.uniform(-2, 2, size=20)
    for lam in (0.5, 2.5):
        for n in range(11):
            lhs = univariate_hermite(lam, n)(xs)
            rhs = lam ** (n / 2) * univariate_hermite(1.0, n)(xs / np.sqrt(lam))
            assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, np.abs(lhs).max())


# -- serialisation ------------------------------------------------------------------

def test_poly_json_round_trip():
    M = random_symmetric_unitary(2, RNG)
    q = ttrr_generate(M, (3, 2))[(3, 2)]
    back = poly_from_json(json.loads(json.dumps(poly_to_json(q))))
    assert coefficient_distance(q, back) == 0.0


def test_symmetry_violation_on_noisy_matrix():
    M = fixtures.MATRICES["M3"] + np.array([[0.0, 1e-6], [-1e-6, 0.0]])
    with pytest.raises((AsymmetricM, SymmetryViolation)):
        ttrr_generate(M, (2, 2))
