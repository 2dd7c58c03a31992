"""Runnable residual checks for every layer of the package.

Each check sweeps a property over fixtures and seeded random inputs and
reports the worst residual together with its tolerance.  The command line
exposes the suites as ``hagedorn verify <scope>`` with scopes frames,
polys, packets, wigner, or all; reports are plain dicts so they serialise
to JSON directly.  All randomness is seeded, so repeated runs produce
byte-identical reports.
"""

import math

import numpy as np

from . import fixtures, phasespace as ps, polys, wavepackets as wp
from .frames import (
    frame_pair,
    omega,
    random_normalised_frame,
    random_symmetric_unitary,
    recursion_matrix,
    safe_inverse,
    symplectic_metric,
    validate_frame,
)

DEFAULT_SEED = 20230815


class CheckResult:
    """Outcome of one named residual check."""

    __slots__ = ("name", "residual", "tolerance", "passed")

    def __init__(self, name, residual, tolerance):
        self.name = name
        self.residual = float(residual)
        self.tolerance = float(tolerance)
        self.passed = bool(self.residual <= self.tolerance)

    def as_dict(self):
        return {
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }

    def __repr__(self):
        state = "pass" if self.passed else "FAIL"
        return f"CheckResult({self.name}: {self.residual:.3e} <= {self.tolerance:.1e} {state})"


def _dist(a, b):
    return float(np.abs(np.asarray(a) - np.asarray(b)).max())


# -- frames ---------------------------------------------------------------------

def check_frames(rng):
    out = []

    res = 0.0
    for f in fixtures.FRAMES.values():
        res = max(res, f.isotropy_residual, f.normalisation_residual)
    out.append(CheckResult("fixture-frame-residuals", res, 1e-12))

    res = 0.0
    for zname, mname in fixtures.MATCHED.items():
        f = fixtures.FRAMES[zname]
        res = max(res, _dist(safe_inverse(f.Q, "Q") @ f.Q.conj(), fixtures.MATRICES[mname]))
    out.append(CheckResult("fixture-recursion-matrices", res, 1e-12))

    rand_frames = [random_normalised_frame(d, rng) for d in (1, 2, 2, 3, 3, 4)]
    rand_frames += [random_normalised_frame(2, rng) for _ in range(14)]
    all_frames = list(fixtures.FRAMES.values()) + rand_frames

    res = 0.0
    for f in all_frames:
        S = f.P @ safe_inverse(f.Q, "Q")
        res = max(res, _dist(S.imag, safe_inverse(f.Q @ f.Q.conj().T, "QQ*").real))
    out.append(CheckResult("envelope-width-identity", res, 1e-10))

    res = 0.0
    sym = 0.0
    spd = 0.0
    for f in all_frames:
        G = symplectic_metric(f)
        O = omega(f.dim)
        res = max(res, _dist(G @ O @ G.T, O))
        sym = max(sym, _dist(G, G.T))
        spd = max(spd, -float(np.linalg.eigvalsh(G).min()))
    out.append(CheckResult("metric-symplectic", res, 1e-10))
    out.append(CheckResult("metric-symmetric", sym, 1e-12))
    out.append(CheckResult("metric-positive", spd, 0.0))

    res = 0.0
    for f in all_frames[:8]:
        U = random_symmetric_unitary(f.dim, rng)
        # any unitary works; a symmetric one is as good as any
        g = validate_frame(f.Q @ U, f.P @ U)
        res = max(res, _dist(symplectic_metric(f), symplectic_metric(g)))
    out.append(CheckResult("metric-unitary-invariance", res, 1e-10))

    res = 0.0
    for f in rand_frames:
        M = recursion_matrix(f, f)
        res = max(res, _dist(M, safe_inverse(f.Q, "Q") @ f.Q.conj()))
    out.append(CheckResult("equal-frame-recursion-reduction", res, 1e-10))

    return out


# -- polynomials ------------------------------------------------------------------

def _oracle_matrices(rng):
    mats = list(fixtures.MATRICES.values())
    mats.append(random_symmetric_unitary(2, rng))
    mats.append(random_symmetric_unitary(3, rng))
    return mats


def check_polys(rng):
    out = []

    gen_res = tensor_res = lag_res = 0.0
    for M in _oracle_matrices(rng):
        d = M.shape[0]
        table = polys.ttrr_generate(M, (6,) * d, total_degree=6)
        for k in table.indices():
            q = table[k]
            scale = max(1.0, abs(q.coefficient(k).real))
            gen_res = max(
                gen_res, polys.coefficient_distance(q, polys.genfunc_coefficient(M, k)) / scale
            )
            tensor_res = max(
                tensor_res, polys.coefficient_distance(q, polys.tensor_expand(M, k)) / scale
            )
            pair = next(
                ((n, m) for n in range(d) for m in range(n + 1, d)
                 if M[n, m] != 0 and k[n] > 0 and k[m] > 0),
                None,
            )
            if pair is not None:
                lag_res = max(
                    lag_res,
                    polys.coefficient_distance(q, polys.laguerre_reduce(M, k, *pair)) / scale,
                )
    out.append(CheckResult("genfunc-oracle", gen_res, 1e-10))
    out.append(CheckResult("tensor-oracle", tensor_res, 1e-10))
    out.append(CheckResult("laguerre-oracle", lag_res, 1e-10))

    M = random_symmetric_unitary(3, rng)
    table = polys.ttrr_generate(M, (3, 3, 3), total_degree=5)
    path_res = ladder_res = 0.0
    for k in table.indices():
        q = table[k]
        for j in range(3):
            for jp in range(j + 1, 3):
                a = polys.raise_index(M, polys.raise_index(M, q, j), jp)
                b = polys.raise_index(M, polys.raise_index(M, q, jp), j)
                path_res = max(path_res, polys.coefficient_distance(a, b))
        for j in range(3):
            up = polys.raise_index(M, q, j)
            kj = k[:j] + (k[j] + 1,) + k[j + 1 :]
            back = polys.gradient_lower(up, kj, j)
            ladder_res = max(ladder_res, polys.coefficient_distance(back, q))
    out.append(CheckResult("raising-path-independence", path_res, 1e-10))
    out.append(CheckResult("ladder-closure", ladder_res, 1e-12))

    eig_res = 0.0
    for M in (fixtures.MATRICES["M2"], fixtures.MATRICES["M3"]):
        table = polys.ttrr_generate(M, (6, 6), total_degree=6)
        for k in table.indices():
            q = table[k]
            scale = max(1.0, abs(q.coefficient(k).real))
            for j in range(2):
                lhs = polys.apply_counting_operator(M, q, j)
                eig_res = max(
                    eig_res, polys.coefficient_distance(lhs, (2.0 * k[j] + 1.0) * q) / scale
                )
    out.append(CheckResult("counting-eigenvector", eig_res, 1e-12))

    # vanishing offdiagonal splits q_k into univariate factors
    lam = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    Md = np.diag(lam)
    table = polys.ttrr_generate(Md, (5, 5), total_degree=10)
    split_res = 0.0
    for k in table.indices():
        prod = polys.MultiIndexPolynomial.constant(2, 1.0)
        for axis in range(2):
            h = polys.univariate_hermite(lam[axis], k[axis])
            prod = prod * polys._embed_univariate(h, 2, axis)
        scale = max(1.0, abs(2.0 ** sum(k)))
        split_res = max(split_res, polys.coefficient_distance(table[k], prod) / scale)
    out.append(CheckResult("diagonal-factorisation", split_res, 1e-12))

    # positive-lambda rescaling of the deformed Hermite family
    x = rng.uniform(-2.0, 2.0, size=20)
    resc_res = 0.0
    for lam in (0.25, 1.7):
        for n in range(11):
            h_lam = polys.univariate_hermite(lam, n)
            h_one = polys.univariate_hermite(1.0, n)
            lhs = h_lam(x)
            rhs = lam ** (n / 2.0) * h_one(x / math.sqrt(lam))
            scale = max(1.0, float(np.abs(lhs).max()))
            resc_res = max(resc_res, float(np.abs(lhs - rhs).max()) / scale)
    out.append(CheckResult("hermite-rescaling", resc_res, 1e-10))

    return out


# -- wave packets -------------------------------------------------------------------

def check_packets(rng):
    out = []
    eps = 0.1

    # orthonormality of the ladder over one frame, d=2, all |k| <= 3
    zf = fixtures.FRAMES["Z2"]
    idx = [k for k in np.ndindex(4, 4) if sum(k) <= 3]
    specs = [wp.wave_packet(zf, k, eps) for k in idx]
    Gm = wp.gram_matrix(specs)
    out.append(CheckResult("gram-identity", _dist(Gm, np.eye(len(idx))), 1e-8))

    # higher excitation normalisation, |k| = 4
    norm_res = 0.0
    for k in [(4, 0), (2, 2), (0, 4)]:
        s = wp.wave_packet(zf, k, eps)
        norm_res = max(norm_res, abs(wp.inner_product(s, s) - 1.0))
    out.append(CheckResult("norm-high-order", norm_res, 1e-8))

    # operator route equals the table route for generalised packets
    op_res = 0.0
    for _ in range(3):
        za = random_normalised_frame(2, rng)
        yb = random_normalised_frame(2, rng)
        pair = frame_pair(za, yb)
        pts = rng.uniform(-1.0, 1.0, size=(50, 2))
        for k in [(1, 0), (0, 2), (2, 2), (1, 3)]:
            spec = wp.WavePacketSpec(pair, k, eps)
            via_table = wp.excited_state(spec, pts)
            pol = wp.prefactor_by_operator(za, yb, k, eps)
            via_op = pol(pts) * wp.ground_state(za, eps, pts)
            scale = float(np.abs(via_table).max())
            op_res = max(op_res, float(np.abs(via_table - via_op).max()) / scale)
    out.append(CheckResult("operator-route-equivalence", op_res, 1e-9))

    # determinant-branch flip changes nothing observable
    s = wp.wave_packet(fixtures.FRAMES["Z3"], (2, 1), eps)
    pts = rng.uniform(-1.0, 1.0, size=(30, 2))
    plus = np.abs(wp.excited_state(s, pts, branch=1))
    minus = np.abs(wp.excited_state(s, pts, branch=-1))
    out.append(CheckResult("branch-robustness", _dist(plus, minus) / plus.max(), 1e-12))

    # translation: phase times shift, exactly
    z0 = np.array([0.3, -0.2, 0.15, 0.4])
    t = wp.translate(wp.wave_packet(zf, (1, 2), eps), z0)
    vals_t = wp.excited_state(t, pts)
    base = wp.excited_state(wp.wave_packet(zf, (1, 2), eps), pts - z0[:2])
    phase = np.exp(1j * ((pts - 0.5 * z0[:2]) @ z0[2:]) / eps)
    trans_res = float(np.abs(vals_t - phase * base).max()) / float(np.abs(base).max())
    out.append(CheckResult("translation-covariance", trans_res, 1e-12))

    # translated packets stay normalised
    out.append(CheckResult("translation-unitarity", abs(wp.inner_product(t, t) - 1.0), 1e-8))

    # ground-state reference values of the standard frame
    std = validate_frame(np.eye(1), 1j * np.eye(1))
    g0 = complex(wp.ground_state(std, 1.0, np.array([0.0])))
    g1 = complex(wp.ground_state(std, 1.0, np.array([1.0])))
    ref = max(
        abs(g0 - math.pi ** -0.25),
        abs(g1 - math.pi ** -0.25 * math.exp(-0.5)),
    )
    out.append(CheckResult("ground-reference-values", ref, 1e-14))

    return out


# -- Wigner transforms -----------------------------------------------------------------

def check_wigner(rng):
    out = []
    eps = 0.1

    # lift identities over fixtures and 20 random frames
    lift_res = 0.0
    frames_list = list(fixtures.FRAMES.values())
    frames_list += [random_normalised_frame(1 + (i % 3), rng) for i in range(20)]
    for f in frames_list:
        lf = ps.lift_frame(f)
        lift_res = max(lift_res, max(lf.residuals.values()))
    out.append(CheckResult("lift-identities", lift_res, 1e-10))

    # block recursion formula vs the generic routine, unequal frames
    block_res = 0.0
    special_res = 0.0
    for _ in range(5):
        za = random_normalised_frame(2, rng)
        yb = random_normalised_frame(2, rng)
        lp = ps.lift_pair(za, yb)
        block_res = max(block_res, lp.residuals["overlap"], lp.residuals["recursion"])
        lp_eq = ps.lift_pair(za)
        special_res = max(special_res, lp_eq.residuals["special"])
    out.append(CheckResult("lift-block-formulas", block_res, 1e-10))
    out.append(CheckResult("lift-equal-frame-reduction", special_res, 1e-12))

    # closed form vs direct quadrature, d=1 random unequal pairs
    thm_res = 0.0
    for _ in range(2):
        za = random_normalised_frame(1, rng)
        yb = random_normalised_frame(1, rng)
        floor = (math.pi * eps) ** -1 * 1e-3
        for k in range(4):
            for l in range(4):
                spec = ps.wigner_spec(za, (k,), (l,), eps, yf=yb)
                for z in rng.uniform(-1.2, 1.2, size=(3, 2)):
                    c = complex(ps.wigner_closed(spec, z))
                    q = ps.wigner_quadrature(za, yb, (k,), (l,), eps, z)
                    thm_res = max(thm_res, abs(c - q) / max(abs(c), abs(q), floor))
    out.append(CheckResult("closed-vs-quadrature-1d", thm_res, 1e-6))

    # d=2 spot checks
    spot_res = 0.0
    spec = ps.wigner_spec(
        fixtures.FRAMES["Z2"], (1, 1), (0, 1), eps, yf=fixtures.FRAMES["Z3"]
    )
    for z in rng.uniform(-0.8, 0.8, size=(5, 4)):
        c = complex(ps.wigner_closed(spec, z))
        q = ps.wigner_quadrature(
            fixtures.FRAMES["Z2"], fixtures.FRAMES["Z3"], (1, 1), (0, 1), eps, z
        )
        spot_res = max(spot_res, abs(c - q) / max(abs(c), abs(q)))
    out.append(CheckResult("closed-vs-quadrature-2d-spot", spot_res, 1e-6))

    # Laguerre product route, Y = Z
    zf = fixtures.FRAMES["Z2"]
    zz = rng.uniform(-1.0, 1.0, size=(20, 4))
    fact_res = 0.0
    for k, l in [((3, 2), (1, 3)), ((2, 0), (2, 1)), ((3, 3), (3, 3))]:
        spec = ps.wigner_spec(zf, k, l, eps)
        c = ps.wigner_closed(spec, zz)
        f = ps.wigner_factorized(zf, k, l, eps, zz)
        fact_res = max(fact_res, float(np.abs(c - f).max() / np.abs(c).max()))
    out.append(CheckResult("factorized-route", fact_res, 1e-9))

    # equal-index transforms are real
    spec = ps.wigner_spec(zf, (2, 1), (2, 1), eps)
    vals = ps.wigner_closed(spec, zz)
    out.append(
        CheckResult("equal-index-realness", float(np.abs(vals.imag).max() / np.abs(vals).max()), 1e-10)
    )

    # phase-space mass and orthogonality
    std1 = validate_frame(np.eye(1), 1j * np.eye(1))
    mass_res = 0.0
    for k in range(4):
        for l in range(4):
            spec = ps.wigner_spec(std1, (k,), (l,), eps)
            val = ps.wigner_integral(spec)
            mass_res = max(mass_res, abs(val - (1.0 if k == l else 0.0)))
    out.append(CheckResult("mass-orthogonality-1d", mass_res, 1e-6))

    spec = ps.wigner_spec(zf, (2, 1), (2, 1), eps)
    mass2 = abs(ps.wigner_integral(spec) - 1.0)
    spec = ps.wigner_spec(zf, (1, 0), (0, 1), eps)
    mass2 = max(mass2, abs(ps.wigner_integral(spec)))
    out.append(CheckResult("mass-orthogonality-2d", mass2, 1e-6))

    # translation covariance of the transform
    za = random_normalised_frame(1, rng)
    z0 = np.array([0.4, -0.3])
    spec0 = ps.wigner_spec(za, (1,), (2,), eps)
    spect = ps.wigner_spec(za, (1,), (2,), eps, center=z0)
    z = np.array([0.25, 0.1])
    a = complex(ps.wigner_closed(spect, z))
    b = complex(ps.wigner_closed(spec0, z - z0))
    q = ps.wigner_quadrature(za, None, (1,), (2,), eps, z, center=z0)
    out.append(
        CheckResult(
            "wigner-translation-covariance",
            max(abs(a - b), abs(q - a)) / max(abs(a), 1e-12),
            1e-9,
        )
    )

    return out


SCOPES = {
    "frames": check_frames,
    "polys": check_polys,
    "packets": check_packets,
    "wigner": check_wigner,
}


def run_scope(scope, seed=DEFAULT_SEED):
    """Run one scope (or "all") and return an ordered list of CheckResults."""
    if scope == "all":
        names = list(SCOPES)
    elif scope in SCOPES:
        names = [scope]
    else:
        raise ValueError(f"unknown scope {scope!r}; pick from {['all', *SCOPES]}")
    results = []
    for name in names:
        rng = np.random.default_rng(seed)
        results.extend(SCOPES[name](rng))
    return results


def report(results):
    """Results as a {check-name: {residual, tolerance, pass}} dict."""
    return {r.name: r.as_dict() for r in results}
