import io
import math

import numpy as np
import pytest

from hagedorn import fixtures
from hagedorn.errors import (
    DimensionMismatch,
    GridTooLarge,
    QuadratureUnderResolved,
)
from hagedorn.frames import frame_pair, random_normalised_frame, validate_frame
from hagedorn.wavepackets import (
    GridJob,
    QuadratureSpec,
    WavePacketSpec,
    excited_state,
    gauss_legendre_nodes,
    gram_matrix,
    grid_eval,
    ground_state,
    inner_product,
    norm_factor,
    prefactor_by_operator,
    translate,
    wave_packet,
    write_grid_csv,
)

RNG = np.random.default_rng(11)
STD1 = validate_frame(np.eye(1), 1j * np.eye(1))


# -- ground state -------------------------------------------------------------

def test_ground_state_reference_values():
    # (pi)^(-1/4) exp(-x^2/2) for the standard frame at eps = 1
    g0 = complex(ground_state(STD1, 1.0, np.array([0.0])))
    assert abs(g0 - math.pi**-0.25) <= 1e-15
    g1 = complex(ground_state(STD1, 1.0, np.array([1.0])))
    assert abs(g1 - math.pi**-0.25 * math.exp(-0.5)) <= 1e-15


def test_ground_state_normalised():
    for d in (1, 2):
        f = random_normalised_frame(d, RNG)
        s = wave_packet(f, (0,) * d, 0.1)
        assert abs(inner_product(s, s) - 1.0) <= 1e-9


def test_ground_state_branch_flip_global_sign():
    f = random_normalised_frame(2, RNG)
    x = RNG.uniform(-1, 1, size=(10, 2))
    assert np.abs(ground_state(f, 0.1, x, branch=1) + ground_state(f, 0.1, x, branch=-1)).max() <= 1e-15


def test_gaussian_width_follows_metric():
    # |phi_0|^2 = (pi eps)^(-d/2) |det Q|^-1 exp(-x^T (QQ*)^-1 x / eps)
    f = random_normalised_frame(2, RNG)
    eps = 0.1
    x = RNG.uniform(-1, 1, size=(20, 2))
    dens = np.abs(ground_state(f, eps, x)) ** 2
    W = np.linalg.inv(f.Q @ f.Q.conj().T).real
    want = (
        (math.pi * eps) ** -1
        / abs(np.linalg.det(f.Q))
        * np.exp(-np.einsum("ni,ij,nj->n", x, W, x) / eps)
    )
    assert np.abs(dens - want).max() <= 1e-12 * want.max()


# -- excited states -----------------------------------------------------------

def test_norm_factor_values():
    assert norm_factor((0, 0)) == pytest.approx(1.0)
    assert norm_factor((1,)) == pytest.approx(2.0**-0.5)
    assert norm_factor((2, 3)) == pytest.approx((2.0**5 * 2 * 6) ** -0.5)


def test_excited_state_d1_hermite():
    # phi_n for the standard frame is the classical Hermite function
    eps = 1.0
    x = np.linspace(-2, 2, 9)
    for n in (1, 2, 5):
        s = wave_packet(STD1, (n,), eps)
        vals = excited_state(s, x)
        hn = np.polynomial.hermite.Hermite.basis(n)(x)
        want = (
            math.pi**-0.25
            / math.sqrt(2.0**n * math.factorial(n))
            * hn
            * np.exp(-(x**2) / 2)
        )
        assert np.abs(vals - want).max() <= 1e-12 * np.abs(want).max()


def test_spec_validation():
    f = random_normalised_frame(2, RNG)
    with pytest.raises(DimensionMismatch):
        wave_packet(f, (1,), 0.1)  # wrong index length
    with pytest.raises(ValueError):
        wave_packet(f, (0, 0), -1.0)  # eps must be positive
    with pytest.raises(ValueError):
        wave_packet(f, (0, 50), 0.1)  # index cap


def test_orthonormality_gram():
    f = fixtures.FRAMES["Z2"]
    idx = [k for k in np.ndindex(3, 3) if sum(k) <= 2]
    specs = [wave_packet(f, k, 0.1) for k in idx]
    G = gram_matrix(specs)
    assert np.abs(G - np.eye(len(idx))).max() <= 1e-8


def test_generalised_packet_parseval():
    # a two-frame packet of index k lives in the span of the first k+1
    # one-frame states, so Parseval must close the norm exactly
    za = random_normalised_frame(1, RNG)
    yb = random_normalised_frame(1, RNG)
    s = wave_packet(za, (2,), 0.1, yf=yb)
    total = inner_product(s, s).real
    recovered = sum(
        abs(inner_product(wave_packet(za, (n,), 0.1), s)) ** 2 for n in range(3)
    )
    assert total == pytest.approx(recovered, abs=1e-8)
    leak = abs(inner_product(wave_packet(za, (3,), 0.1), s)) ** 2
    assert leak <= 1e-10


def test_operator_route_matches_table_route():
    za = random_normalised_frame(2, RNG)
    yb = random_normalised_frame(2, RNG)
    x = RNG.uniform(-1, 1, size=(25, 2))
    for k in [(2, 0), (1, 2)]:
        s = wave_packet(za, k, 0.1, yf=yb)
        via_table = excited_state(s, x)
        via_op = prefactor_by_operator(za, yb, k, 0.1)(x) * ground_state(za, 0.1, x)
        assert np.abs(via_table - via_op).max() <= 1e-9 * np.abs(via_table).max()


def test_branch_robustness_excited():
    s = wave_packet(fixtures.FRAMES["Z3"], (1, 2), 0.1)
    x = RNG.uniform(-1, 1, size=(15, 2))
    assert np.abs(
        np.abs(excited_state(s, x, branch=1)) - np.abs(excited_state(s, x, branch=-1))
    ).max() <= 1e-13


# -- translation ---------------------------------------------------------------

def test_translation_covariance_exact():
    f = fixtures.FRAMES["Z1"]
    eps = 0.1
    z0 = np.array([0.4, -0.1, 0.2, 0.3])
    s = wave_packet(f, (1, 1), eps)
    t = translate(s, z0)
    x = RNG.uniform(-1, 1, size=(20, 2))
    lhs = excited_state(t, x)
    phase = np.exp(1j * ((x - 0.5 * z0[:2]) @ z0[2:]) / eps)
    rhs = phase * excited_state(s, x - z0[:2])
    assert np.abs(lhs - rhs).max() <= 1e-12 * np.abs(rhs).max()


def test_translation_composition_cocycle():
    f = fixtures.FRAMES["Z1"]
    eps = 0.1
    z0 = np.array([0.3, 0.0, -0.2, 0.5])
    z1 = np.array([-0.1, 0.4, 0.3, 0.2])
    s = wave_packet(f, (0, 1), eps)
    ab = translate(translate(s, z0), z1)
    direct = translate(s, z0 + z1)
    cocycle = np.exp(1j * (z1[2:] @ z0[:2] - z0[2:] @ z1[:2]) / (2 * eps))
    x = RNG.uniform(-1, 1, size=(10, 2))
    assert np.abs(excited_state(ab, x) - cocycle * excited_state(direct, x)).max() <= 1e-13


def test_translated_norm_preserved():
    s = wave_packet(fixtures.FRAMES["Z2"], (2, 0), 0.1)
    t = translate(s, np.array([0.5, -0.3, 0.2, 0.1]))
    assert abs(inner_product(t, t) - 1.0) <= 1e-8


# -- quadrature and grids --------------------------------------------------------

def test_gauss_legendre_exactness():
    # degree-9 polynomial integrated exactly by 5 nodes
    x, w = gauss_legendre_nodes(0.0, 2.0, 5)
    val = float(w @ x**9)
    assert abs(val - 2.0**10 / 10) <= 1e-12


def test_inner_product_dimension_guard():
    a = wave_packet(fixtures.FRAMES["Z1"], (0, 0), 0.1)
    b = wave_packet(STD1, (0,), 0.1)
    with pytest.raises(DimensionMismatch):
        inner_product(a, b)


def test_under_resolved_quadrature_raises():
    s = wave_packet(STD1, (3,), 0.1)
    quad = QuadratureSpec(nodes_per_axis=4, halfwidth_sigmas=2.0, tail_tol=1e-12)
    with pytest.raises(QuadratureUnderResolved):
        inner_product(s, s, quad=quad)


def test_node_starved_quadrature_raises():
    # wide default box at high excitation: the 150-node default cannot
    # resolve the oscillations and must refuse rather than return garbage
    s = wave_packet(fixtures.FRAMES["Z1"], (7, 6), 0.1)
    with pytest.raises(QuadratureUnderResolved) as err:
        inner_product(s, s)
    assert err.value.reason == "nodes"
    # a node count above the reported floor integrates to machine accuracy
    quad = QuadratureSpec(nodes_per_axis=int(err.value.estimate) + 50)
    assert abs(inner_product(s, s, quad=quad) - 1.0) <= 1e-10


def test_grid_job_guards():
    with pytest.raises(GridTooLarge):
        GridJob([-1, -1], [1, 1], [4000, 4000])
    with pytest.raises(ValueError):
        GridJob([-1], [1], [1])


def test_grid_eval_and_csv_round_trip():
    s = wave_packet(STD1, (1,), 1.0)
    job = grid_eval(s, GridJob([-1.0], [1.0], [5]))
    buf = io.StringIO()
    write_grid_csv(job, buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "x1,re,im,abs"
    assert len(lines) == 6
    row = lines[3].split(",")  # x = 0, odd state vanishes
    assert float(row[0]) == 0.0
    assert abs(float(row[1])) <= 1e-16
    # values parse back to the direct evaluation
    mid = complex(float(row[1]), float(row[2]))
    direct = complex(excited_state(s, np.array([0.0])))
    assert abs(mid - direct) <= 1e-15


def test_csv_deterministic():
    s = wave_packet(fixtures.FRAMES["Z1"], (1, 0), 0.1)
    job = grid_eval(s, GridJob([-1, -1], [1, 1], [7, 7]))
    a, b = io.StringIO(), io.StringIO()
    write_grid_csv(job, a)
    write_grid_csv(job, b)
    assert a.getvalue() == b.getvalue()
