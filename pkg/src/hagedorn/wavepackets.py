"""Semiclassical wave packets built on Lagrangian frames.

The ground state of a frame Z = (Q; P) at semiclassical parameter eps is

    phi_0(x) = (pi eps)^{-d/4} det(Q)^{-1/2} exp((i/2 eps) x.PQ^{-1} x),

an L^2-normalised Gaussian (principal branch of the determinant root; the
branch only moves a global sign, and the package treats packets that differ
by it as the same state).  Excited states carry a polynomial prefactor

    phi_k(x) = (2^{|k|} k!)^{-1/2} q_k^M(u) phi_0(x),
    u = eps^{-1/2} B^* Q^{-1} x,

with B and M the overlap and recursion matrices of the frame pair (Z, Y);
Y = Z gives B = Id and the classical ladder of states, which is orthonormal.
General pairs give well-defined packets that are usually not orthogonal.

Packets are translated in phase space by the operator
(T_z0 psi)(x) = exp(i p0.(x - q0/2) / eps) psi(x - q0), z0 = (q0, p0).

An independent construction route, :func:`prefactor_by_operator`, builds the
prefactor by iterating the raising operator in position representation and
never touches the recursion table; it is the packet-level oracle.
"""

import math

import numpy as np

from . import polys
from .errors import DimensionMismatch, GridTooLarge, QuadratureUnderResolved
from .frames import FramePair, frame_pair, safe_inverse

#: default semiclassical parameter used by the command line and the demos
EPS_DEFAULT = 0.1

#: hard cap on evaluation grid sizes
GRID_MAX_POINTS = 10**7


def norm_factor(k):
    """(2^{|k|} k!)^{-1/2}, computed in log-space and exponentiated once."""
    lg = sum(math.lgamma(v + 1) for v in k) + sum(k) * math.log(2.0)
    return math.exp(-0.5 * lg)


class WavePacketSpec:
    """Immutable description of one wave packet.

    Attributes
    ----------
    pair : FramePair
        Frames (Z, Y) with their overlap and recursion matrices.
    k : tuple of int
        Excitation multi-index.
    eps : float
        Semiclassical parameter, positive.
    center : ndarray, shape (2d,)
        Phase-space centre z0 = (q0, p0).
    phase : complex
        Global unit phase accumulated by translation composition.
    """

    __slots__ = ("pair", "k", "eps", "center", "phase")

    def __init__(self, pair, k, eps, center=None, phase=1.0 + 0j):
        d = pair.dim
        k = tuple(int(v) for v in k)
        if len(k) != d or any(v < 0 for v in k):
            raise DimensionMismatch(f"multi-index {k} invalid for dimension {d}")
        if any(v > polys.KMAX_AXIS for v in k) or sum(k) > polys.KMAX_TOTAL:
            raise ValueError(
                f"multi-index {k} beyond caps ({polys.KMAX_AXIS} per axis, "
                f"{polys.KMAX_TOTAL} total)"
            )
        eps = float(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        if center is None:
            center = np.zeros(2 * d)
        center = np.array(center, dtype=float)
        if center.shape != (2 * d,):
            raise DimensionMismatch(f"center must have shape ({2*d},)")
        center.flags.writeable = False
        self.pair = pair
        self.k = k
        self.eps = eps
        self.center = center
        self.phase = complex(phase)

    @property
    def dim(self):
        return self.pair.dim

    def __repr__(self):
        return f"WavePacketSpec(dim={self.dim}, k={self.k}, eps={self.eps})"


def wave_packet(zf, k, eps, yf=None, center=None):
    """Convenience builder: packet of the pair (Z, Y), Y defaulting to Z."""
    return WavePacketSpec(frame_pair(zf, yf), k, eps, center=center)


# -- cached pair data ---------------------------------------------------------

def pair_table(pair, k):
    """Recursion-table polynomial q_k^M of the pair, cached and grown as needed."""
    tab = pair._cache.get("table")
    if tab is None or any(a > b for a, b in zip(k, tab.kmax)):
        old = tab.kmax if tab is not None else (0,) * len(k)
        kmax = tuple(max(a, b) for a, b in zip(k, old))
        tab = polys.ttrr_generate(
            pair.M, kmax, total_degree=min(sum(kmax), polys.KMAX_TOTAL)
        )
        pair._cache["table"] = tab
    return tab[k]


def argument_map(pair):
    """Matrix B^* Q^{-1} sending x to the polynomial argument (up to eps^{-1/2})."""
    A = pair._cache.get("argmap")
    if A is None:
        A = pair.B.conj().T @ safe_inverse(pair.Z.Q, "Q")
        pair._cache["argmap"] = A
    return A


def _pq_inverse(frame):
    return frame.P @ safe_inverse(frame.Q, "Q")


# -- evaluation ----------------------------------------------------------------

def ground_state(frame, eps, x, branch=1):
    """Evaluate the Gaussian ground state of a frame at points x.

    Parameters
    ----------
    frame : LagrangianFrame
    eps : float
        Semiclassical parameter.
    x : array_like, shape (..., d)
        Evaluation points (real).
    branch : {+1, -1}
        Sign of the determinant square root; physical quantities never
        depend on it.

    Returns
    -------
    ndarray of complex, shape (...,)
    """
    d = frame.dim
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != d:
        raise DimensionMismatch(f"points have last axis {x.shape[-1]}, frame dim is {d}")
    S = _pq_inverse(frame)
    quad = np.einsum("...i,ij,...j->...", x, S, x)
    amp = (math.pi * eps) ** (-d / 4.0) * branch / np.sqrt(np.linalg.det(frame.Q))
    return amp * np.exp(0.5j * quad / eps)


def _center_phase(spec, x):
    """Heisenberg-Weyl phase exp(i p0.(x - q0/2)/eps) times the stored phase."""
    d = spec.dim
    q0 = spec.center[:d]
    p0 = spec.center[d:]
    if not p0.any():
        return spec.phase
    return spec.phase * np.exp(1j * ((x - 0.5 * q0) @ p0) / spec.eps)


def excited_state(spec, x, branch=1):
    """Evaluate the wave packet phi_k[Z, Y] described by ``spec`` at points x.

    Points have shape (..., d); the result drops the last axis.  Evaluation
    is the closed form: normalisation, recursion-table polynomial at the
    scaled argument, Gaussian ground state, and the translation phase.
    ``branch`` picks the sign of the ground-state determinant root; only the
    global sign of the result depends on it.
    """
    d = spec.dim
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != d:
        raise DimensionMismatch(f"points have last axis {x.shape[-1]}, packet dim is {d}")
    y = x - spec.center[:d]
    vals = ground_state(spec.pair.Z, spec.eps, y, branch=branch)
    if any(spec.k):
        q = pair_table(spec.pair, spec.k)
        u = y @ argument_map(spec.pair).T / math.sqrt(spec.eps)
        vals = vals * (norm_factor(spec.k) * q(u))
    phase = _center_phase(spec, x)
    return vals * phase


def prefactor_by_operator(zf, yf, k, eps):
    """Polynomial p with phi_k(x) = p(x) phi_0(x), built by raising operators.

    Iterates the position-representation raising operator

        (A+ p)_j = -sqrt(eps) (X^* grad p)_j + (2/sqrt(eps)) (B^* Q^{-1} x)_j p

    on the constant 1 (Y = (X; K)), then applies the (2^{|k|} k!)^{-1/2}
    normalisation.  No recursion table, no argument rescaling: an independent
    route to the same prefactor, used as an oracle for :func:`excited_state`.
    """
    pair = frame_pair(zf, yf)
    d = pair.dim
    k = tuple(int(v) for v in k)
    if len(k) != d:
        raise DimensionMismatch(f"multi-index {k} invalid for dimension {d}")
    coef_x = (2.0 / math.sqrt(eps)) * argument_map(pair)
    coef_d = -math.sqrt(eps) * yf.Q.conj().T
    p = polys.MultiIndexPolynomial.constant(d, 1.0)
    for j in range(d):
        for _ in range(k[j]):
            new = polys.MultiIndexPolynomial(d)
            for i in range(d):
                if coef_x[j, i] != 0:
                    new = new + coef_x[j, i] * p.mul_var(i)
                if coef_d[j, i] != 0:
                    new = new + coef_d[j, i] * p.diff(i)
            p = new
    return norm_factor(k) * p


def translate(spec, z0):
    """Apply the phase-space translation T_z0 to a packet.

    Composing two translations is exact: the combined centre is the sum and
    the Weyl cocycle phase exp(i (p1.q0 - p0.q1) / (2 eps)) is folded into
    the spec's global phase.
    """
    d = spec.dim
    z0 = np.asarray(z0, dtype=float)
    if z0.shape != (2 * d,):
        raise DimensionMismatch(f"translation vector must have shape ({2*d},)")
    q0, p0 = spec.center[:d], spec.center[d:]
    q1, p1 = z0[:d], z0[d:]
    cocycle = np.exp(0.5j * (p1 @ q0 - p0 @ q1) / spec.eps)
    return WavePacketSpec(
        spec.pair, spec.k, spec.eps, center=spec.center + z0, phase=spec.phase * cocycle
    )


# -- quadrature ----------------------------------------------------------------

class QuadratureSpec:
    """Gauss-Legendre tensor rule parameters for position-space integrals."""

    __slots__ = ("nodes_per_axis", "halfwidth_sigmas", "tail_tol")

    def __init__(self, nodes_per_axis=150, halfwidth_sigmas=8.0, tail_tol=1e-12):
        self.nodes_per_axis = int(nodes_per_axis)
        self.halfwidth_sigmas = float(halfwidth_sigmas)
        self.tail_tol = float(tail_tol)


def gauss_legendre_nodes(a, b, n):
    """Gauss-Legendre nodes and weights on the interval [a, b]."""
    t, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * t + 0.5 * (a + b), 0.5 * (b - a) * w


def tensor_rule(lowers, uppers, nodes_per_axis):
    """Tensor-product rule; returns points (N, d) and weights (N,)."""
    axes = [
        gauss_legendre_nodes(a, b, nodes_per_axis)
        for a, b in zip(lowers, uppers)
    ]
    grids = np.meshgrid(*[ax[0] for ax in axes], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wg = np.meshgrid(*[ax[1] for ax in axes], indexing="ij")
    w = np.prod(np.stack([g.ravel() for g in wg], axis=-1), axis=-1)
    return pts, w


def packet_spread(frame):
    """Largest eigenvalue of QQ^*, the squared frame spread."""
    return float(np.linalg.eigvalsh(frame.Q @ frame.Q.conj().T).max())


def _spread_min(frame):
    return float(np.linalg.eigvalsh(frame.Q @ frame.Q.conj().T).min())


def tail_estimate(r, degree, dim):
    # Gaussian mass beyond r sigmas, with polynomial growth headroom
    return math.exp(-r * r) * (1.0 + r) ** (2 * degree + dim)


def nodes_needed(halfwidth, eps, lam_min, degrees):
    """Nodes per axis required to resolve a polynomial-times-Gaussian product.

    Gauss-Legendre nodes have centre spacing pi * halfwidth / N, and a
    degree-n excitation oscillates with wavenumber up to sqrt(2n+1) on the
    narrowest frame scale sqrt(eps * lambda_min(QQ^*)).  Frequencies of the
    two factors add; the factor 1.2 is calibrated headroom over the Nyquist
    count.  A node count below this bound produces silently wrong values
    long before the tail estimate notices, so callers treat it as a hard
    floor.
    """
    sigma_min = math.sqrt(eps * lam_min)
    freq = sum(math.sqrt(2.0 * n + 1.0) for n in degrees) / sigma_min
    return int(math.ceil(1.2 * halfwidth * freq))


def inner_product(a, b, quad=None):
    """L^2 inner product <phi_a, phi_b> by Gauss-Legendre tensor quadrature.

    Both packets must share dimension, eps and centre.  The box is centred at
    the common position centre with half-width
    ``halfwidth_sigmas * sqrt(eps * lambda_max(QQ^*)) * (1 + deg/4)`` per
    axis, using the larger spread of the two frames and the larger of the two
    total degrees.  Raises QuadratureUnderResolved when the estimated
    Gaussian tail outside the box exceeds the tail tolerance.
    """
    if quad is None:
        quad = QuadratureSpec()
    if a.dim != b.dim:
        raise DimensionMismatch("packet dimensions differ")
    if a.eps != b.eps:
        raise ValueError("packets must share eps")
    if not np.allclose(a.center, b.center, atol=1e-14):
        raise ValueError("packets must share their centre")
    d = a.dim
    frames = (a.pair.Z, a.pair.Y, b.pair.Z, b.pair.Y)
    lam = max(packet_spread(f) for f in frames)
    lam_min = min(_spread_min(f) for f in frames)
    deg = max(sum(a.k), sum(b.k))
    sigma = math.sqrt(a.eps * lam)
    hw = quad.halfwidth_sigmas * sigma * (1.0 + deg / 4.0)
    est = tail_estimate(hw / sigma, deg, d)
    if est > quad.tail_tol:
        raise QuadratureUnderResolved(est, quad.tail_tol)
    need = nodes_needed(hw, a.eps, lam_min, (sum(a.k), sum(b.k)))
    if quad.nodes_per_axis < need:
        raise QuadratureUnderResolved(need, quad.nodes_per_axis, reason="nodes")
    q0 = a.center[:d]
    pts, w = tensor_rule(q0 - hw, q0 + hw, quad.nodes_per_axis)
    vals = np.conj(excited_state(a, pts)) * excited_state(b, pts)
    return complex(np.sum(w * vals))


def gram_matrix(specs, quad=None):
    """Gram matrix of a list of packets sharing frame data, eps and centre.

    Evaluates every packet once on a shared tensor grid, so the cost is
    linear in the number of packets plus one matrix product.
    """
    if quad is None:
        quad = QuadratureSpec()
    first = specs[0]
    d = first.dim
    for s in specs[1:]:
        if s.dim != d or s.eps != first.eps or not np.allclose(s.center, first.center):
            raise ValueError("gram_matrix needs packets sharing dim, eps and centre")
    lam = max(
        max(packet_spread(s.pair.Z), packet_spread(s.pair.Y)) for s in specs
    )
    lam_min = min(
        min(_spread_min(s.pair.Z), _spread_min(s.pair.Y)) for s in specs
    )
    deg = max(sum(s.k) for s in specs)
    sigma = math.sqrt(first.eps * lam)
    hw = quad.halfwidth_sigmas * sigma * (1.0 + deg / 4.0)
    est = tail_estimate(hw / sigma, deg, d)
    if est > quad.tail_tol:
        raise QuadratureUnderResolved(est, quad.tail_tol)
    need = nodes_needed(hw, first.eps, lam_min, (deg, deg))
    if quad.nodes_per_axis < need:
        raise QuadratureUnderResolved(need, quad.nodes_per_axis, reason="nodes")
    q0 = first.center[:d]
    pts, w = tensor_rule(q0 - hw, q0 + hw, quad.nodes_per_axis)
    F = np.stack([excited_state(s, pts) for s in specs])
    return (F.conj() * w) @ F.T


# -- grids and files --------------------------------------------------------------

class GridJob:
    """Rectangular evaluation grid with optional values.

    Nodes are the tensor product of inclusive linspaces, flattened in
    row-major order (first axis slowest).  Total node count is capped.
    """

    __slots__ = ("lower", "upper", "points", "values")

    def __init__(self, lower, upper, points, values=None):
        lower = tuple(float(v) for v in lower)
        upper = tuple(float(v) for v in upper)
        points = tuple(int(v) for v in points)
        if not (len(lower) == len(upper) == len(points)):
            raise DimensionMismatch("lower, upper and points must share length")
        if any(hi <= lo for lo, hi in zip(lower, upper)):
            raise ValueError("upper must exceed lower on every axis")
        if any(n < 2 for n in points):
            raise ValueError("need at least 2 points per axis")
        total = math.prod(points)
        if total > GRID_MAX_POINTS:
            raise GridTooLarge(total, GRID_MAX_POINTS)
        self.lower = lower
        self.upper = upper
        self.points = points
        self.values = values

    @property
    def dim(self):
        return len(self.lower)

    @property
    def total(self):
        return math.prod(self.points)

    def axes(self):
        return [
            np.linspace(lo, hi, n)
            for lo, hi, n in zip(self.lower, self.upper, self.points)
        ]

    def nodes(self):
        grids = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    def with_values(self, values):
        values = np.asarray(values, dtype=complex).ravel()
        if values.shape != (self.total,):
            raise DimensionMismatch("values do not match the grid size")
        return GridJob(self.lower, self.upper, self.points, values)


def grid_eval(spec, job, chunk=2_000_000):
    """Evaluate a packet on a grid, returning the job with values filled in."""
    if job.dim != spec.dim:
        raise DimensionMismatch("grid dimension does not match the packet")
    pts = job.nodes()
    out = np.empty(pts.shape[0], dtype=complex)
    for start in range(0, pts.shape[0], chunk):
        stop = min(start + chunk, pts.shape[0])
        out[start:stop] = excited_state(spec, pts[start:stop])
    return job.with_values(out)


def write_grid_csv(job, stream, var_names=None):
    """Write grid values as CSV rows ``<coords>,re,im,abs``.

    Floats are written with ``repr`` (shortest round-trip form), so repeated
    runs produce byte-identical files.
    """
    if job.values is None:
        raise ValueError("grid has no values; run grid_eval first")
    if var_names is None:
        var_names = [f"x{i+1}" for i in range(job.dim)]
    if len(var_names) != job.dim:
        raise DimensionMismatch("variable names do not match the grid dimension")
    pts = job.nodes()
    stream.write(",".join([*var_names, "re", "im", "abs"]) + "\n")
    for row, v in zip(pts, job.values):
        coords = ",".join(repr(float(c)) for c in row)
        v = complex(v)
        stream.write(
            f"{coords},{v.real!r},{v.imag!r},{abs(v)!r}\n"
        )
