"""Complex symplectic linear algebra for normalised Lagrangian frames.

A Lagrangian frame is a complex 2d x d matrix Z = (Q; P), Q and P square,
that is isotropic, Z^T Omega Z = 0, and normalised, (i/2) Z^* Omega Z = Id,
for the standard symplectic form Omega on R^{2d}.  These two conditions make
Q and P invertible, PQ^{-1} symmetric with positive definite imaginary part
Im(PQ^{-1}) = (QQ^*)^{-1}, and QQ^*, PP^* real.

Frames parametrise Gaussian wave packets.  Three derived matrices drive the
rest of the package:

* the symplectic metric  G_Z = Omega^T Re(Z Z^*) Omega,  a real symmetric
  positive definite symplectic matrix, invariant under Z -> Z U for unitary U;
* the overlap            B = (i/2) Z^* Omega Y  of two frames (B = Id when
  Y = Z);
* the recursion matrix   M = (1/4) Y^* G_Z conj(Y) + B^* Q^{-1} conj(Q) conj(B),
  complex symmetric, which parametrises the polynomial prefactors of the
  excited states (M = Q^{-1} conj(Q) when Y = Z).

All matrix inverses go through LU factorisation with partial pivoting
(numpy.linalg) and are refused above a condition-number bound.
"""

import numpy as np

from .errors import (
    DimensionMismatch,
    NotIsotropic,
    NotNormalised,
    Singular,
    SymmetryViolation,
)

#: default tolerance for frame residuals
TOL_FRAME = 1e-10

#: condition numbers above this bound are treated as singular
COND_MAX = 1e12


def omega(d):
    """Standard symplectic form on R^{2d} as a real (2d, 2d) array."""
    O = np.zeros((2 * d, 2 * d))
    O[:d, d:] = -np.eye(d)
    O[d:, :d] = np.eye(d)
    return O


def safe_inverse(A, name="matrix"):
    """Invert a square matrix, raising Singular above the condition bound."""
    A = np.asarray(A, dtype=complex)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > COND_MAX:
        raise Singular(name, cond)
    return np.linalg.inv(A)


class LagrangianFrame:
    """A validated normalised Lagrangian frame.

    Instances are produced by :func:`validate_frame` and treated as
    immutable; the stored arrays are marked read-only.

    Attributes
    ----------
    Q, P : ndarray, shape (d, d)
        The two square blocks of the frame.
    dim : int
        Dimension d.
    isotropy_residual, normalisation_residual : float
        Frobenius norms of the two defining residuals, as validated.
    """

    __slots__ = ("Q", "P", "dim", "isotropy_residual", "normalisation_residual")

    def __init__(self, Q, P, isotropy_residual, normalisation_residual):
        Q = np.array(Q, dtype=complex)
        P = np.array(P, dtype=complex)
        Q.flags.writeable = False
        P.flags.writeable = False
        self.Q = Q
        self.P = P
        self.dim = Q.shape[0]
        self.isotropy_residual = float(isotropy_residual)
        self.normalisation_residual = float(normalisation_residual)

    @property
    def Z(self):
        """Stacked (2d, d) frame matrix."""
        return np.vstack([self.Q, self.P])

    def __repr__(self):
        return f"LagrangianFrame(dim={self.dim})"


def frame_residuals(Q, P):
    """Residuals of the two frame conditions plus condition numbers.

    Returns a dict with keys ``isotropy``, ``normalisation``, ``cond_Q``,
    ``cond_P``.  Never raises on a bad frame; used by validation and by the
    command-line report.
    """
    Q = np.asarray(Q, dtype=complex)
    P = np.asarray(P, dtype=complex)
    d = Q.shape[0]
    Z = np.vstack([Q, P])
    O = omega(d)
    iso = np.linalg.norm(Z.T @ O @ Z)
    norm = np.linalg.norm(0.5j * (Z.conj().T @ O @ Z) - np.eye(d))
    return {
        "isotropy": float(iso),
        "normalisation": float(norm),
        "cond_Q": float(np.linalg.cond(Q)),
        "cond_P": float(np.linalg.cond(P)),
    }


def validate_frame(Q, P, tol=TOL_FRAME):
    """Check the frame conditions and wrap (Q, P) in a LagrangianFrame.

    Parameters
    ----------
    Q, P : array_like, shape (d, d)
        Square complex blocks of the candidate frame.
    tol : float
        Tolerance on the Frobenius norms of both residuals.

    Raises
    ------
    DimensionMismatch
        Non-square blocks or mismatched shapes.
    NotIsotropic, NotNormalised
        Residual above ``tol``; the residual rides on the exception.
    Singular
        Q or P has condition number above COND_MAX.
    """
    Q = np.asarray(Q, dtype=complex)
    P = np.asarray(P, dtype=complex)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise DimensionMismatch(f"Q must be square, got shape {Q.shape}")
    if P.shape != Q.shape:
        raise DimensionMismatch(f"P shape {P.shape} does not match Q shape {Q.shape}")
    if not (np.isfinite(Q).all() and np.isfinite(P).all()):
        raise ValueError("frame entries must be finite")
    res = frame_residuals(Q, P)
    if res["isotropy"] > tol:
        raise NotIsotropic(res["isotropy"])
    if res["normalisation"] > tol:
        raise NotNormalised(res["normalisation"])
    if res["cond_Q"] > COND_MAX:
        raise Singular("Q", res["cond_Q"])
    if res["cond_P"] > COND_MAX:
        raise Singular("P", res["cond_P"])
    return LagrangianFrame(Q, P, res["isotropy"], res["normalisation"])


def symplectic_metric(frame):
    """Symplectic metric G_Z = Omega^T Re(Z Z^*) Omega of a frame.

    The result is real symmetric positive definite and symplectic
    (G Omega G^T = Omega), and depends on Z only through the Gaussian it
    parametrises: right-multiplying Z by a unitary leaves G unchanged.
    """
    Z = frame.Z
    O = omega(frame.dim)
    return O.T @ (Z @ Z.conj().T).real @ O


def overlap_matrix(zf, yf):
    """Overlap B = (i/2) Z^* Omega Y of two frames of equal dimension."""
    if zf.dim != yf.dim:
        raise DimensionMismatch(f"frame dims {zf.dim} and {yf.dim} differ")
    return 0.5j * (zf.Z.conj().T @ omega(zf.dim) @ yf.Z)


def recursion_matrix(zf, yf, tol=TOL_FRAME):
    """Recursion matrix M of a frame pair.

    M = (1/4) Y^* G_Z conj(Y) + B^* Q^{-1} conj(Q) conj(B) with B the overlap
    of the pair.  M is complex symmetric; an asymmetry beyond ``tol`` (scaled
    by the matrix norm) raises SymmetryViolation.  For Y = Z this reduces to
    Q^{-1} conj(Q), which is symmetric unitary.
    """
    if zf.dim != yf.dim:
        raise DimensionMismatch(f"frame dims {zf.dim} and {yf.dim} differ")
    B = overlap_matrix(zf, yf)
    G = symplectic_metric(zf)
    Qinv = safe_inverse(zf.Q, "Q")
    Y = yf.Z
    M = 0.25 * (Y.conj().T @ G @ Y.conj()) + B.conj().T @ Qinv @ zf.Q.conj() @ B.conj()
    asym = np.linalg.norm(M - M.T)
    if asym > tol * max(1.0, np.linalg.norm(M)):
        raise SymmetryViolation(asym)
    return M


class FramePair:
    """Two frames of equal dimension with their overlap and recursion matrix.

    ``B`` and ``M`` are computed once at construction.  The ``_cache`` dict
    holds derived objects (polynomial tables, argument maps); it is an
    implementation detail and never part of the value.
    """

    __slots__ = ("Z", "Y", "B", "M", "_cache")

    def __init__(self, zf, yf, tol=TOL_FRAME):
        if zf.dim != yf.dim:
            raise DimensionMismatch(f"frame dims {zf.dim} and {yf.dim} differ")
        self.Z = zf
        self.Y = yf
        self.B = overlap_matrix(zf, yf)
        self.M = recursion_matrix(zf, yf, tol=tol)
        self._cache = {}

    @property
    def dim(self):
        return self.Z.dim

    @property
    def equal_frames(self):
        return self.Z is self.Y or (
            np.array_equal(self.Z.Q, self.Y.Q) and np.array_equal(self.Z.P, self.Y.P)
        )

    def __repr__(self):
        return f"FramePair(dim={self.dim}, equal_frames={self.equal_frames})"


def frame_pair(zf, yf=None, tol=TOL_FRAME):
    """Build a FramePair; ``yf`` defaults to ``zf`` (the standard family)."""
    return FramePair(zf, zf if yf is None else yf, tol=tol)


# -- random draws -----------------------------------------------------------

def random_normalised_frame(d, rng, scale=1.0):
    """Draw a random normalised Lagrangian frame.

    Construction: P0 = (iW + S) Q0 with W random symmetric positive definite
    and S random symmetric makes (Q0; P0) exactly isotropic with
    (i/2) Z0^* Omega Z0 = Q0^* W Q0 Hermitian positive definite; the columns
    are then normalised through the Cholesky factor of that matrix.

    Parameters
    ----------
    d : int
        Dimension.
    rng : numpy.random.Generator
        Source of randomness.
    scale : float
        Spread of the random draws; keep moderate for well-conditioned frames.
    """
    A = scale * rng.standard_normal((d, d))
    W = A @ A.T + 0.5 * np.eye(d)
    S0 = scale * rng.standard_normal((d, d))
    S = 0.5 * (S0 + S0.T)
    Q0 = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    while np.linalg.cond(Q0) > 1e3:
        Q0 = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    P0 = (1j * W + S) @ Q0
    Z0 = np.vstack([Q0, P0])
    N = 0.5j * (Z0.conj().T @ omega(d) @ Z0)
    N = 0.5 * (N + N.conj().T)
    L = np.linalg.cholesky(N)
    Zn = Z0 @ np.linalg.inv(L.conj().T)
    return validate_frame(Zn[:d], Zn[d:])


def haar_unitary(d, rng):
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    X = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Qu, R = np.linalg.qr(X)
    return Qu * (np.diagonal(R) / np.abs(np.diagonal(R)))


def random_symmetric_unitary(d, rng):
    """Random complex symmetric unitary matrix.

    Realised as Q^{-1} conj(Q) of a random normalised frame, which is
    symmetric unitary because QQ^* is real for such frames.
    """
    f = random_normalised_frame(d, rng)
    M = safe_inverse(f.Q, "Q") @ f.Q.conj()
    return 0.5 * (M + M.T)


# -- JSON interchange --------------------------------------------------------
# Complex matrices travel as nested lists with entries [re, im].

def matrix_to_json(A):
    A = np.asarray(A, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in A]


def matrix_from_json(obj):
    rows = []
    for row in obj:
        rows.append([complex(float(v[0]), float(v[1])) for v in row])
    A = np.array(rows, dtype=complex)
    if A.ndim != 2:
        raise ValueError("expected a two-dimensional matrix")
    return A


def frame_to_json(frame):
    return {"Q": matrix_to_json(frame.Q), "P": matrix_to_json(frame.P)}


def frame_from_json(obj, tol=TOL_FRAME):
    if "Q" not in obj or "P" not in obj:
        raise ValueError("frame JSON must carry 'Q' and 'P' keys")
    return validate_frame(matrix_from_json(obj["Q"]), matrix_from_json(obj["P"]), tol=tol)
