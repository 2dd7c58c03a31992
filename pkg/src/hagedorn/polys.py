"""Sparse multivariate polynomials from a matrix three-term recursion.

For a complex symmetric d x d matrix M the family q_k, indexed by
multi-indices k in N^d, is defined by q_0 = 1, q_l = 0 for l outside N^d, and

    q_{k+e_j} = 2 x_j q_k - 2 sum_i M_{ji} k_i q_{k-e_i} .

Symmetry of M makes the recursion path-independent, so q_k is well defined.
The x^k coefficient of q_k is 2^{|k|}; diagonal M factorises q_k into
univariate lambda-deformed Hermite polynomials H^lambda_n, and a nonzero
off-diagonal entry contracts a pair of indices into a generalised Laguerre
polynomial.

The module deliberately carries several independent construction routes so
each can act as an oracle for the others:

* :func:`ttrr_generate`          -- the recursion itself, tabulated;
* :func:`genfunc_coefficient`    -- multinomial expansion of the generating
                                    function exp(2 x.t - t.M t);
* :func:`raise_index` / :func:`gradient_lower` -- ladder operators
                                    b+ = 2x - M grad and grad;
* :func:`laguerre_reduce`        -- Laguerre contraction of one index pair;
* :func:`tensor_expand`          -- full expansion over all off-diagonal
                                    pairs into products of H^lambda_n.
"""

import math

import numpy as np

from .errors import AsymmetricM, AxisOutOfRange, DimensionMismatch, ZeroOffdiagonal

#: hard caps on table generation
KMAX_AXIS = 32
KMAX_TOTAL = 40

#: tolerance for the symmetry check on M, scaled by max(1, ||M||)
SYMMETRY_TOL = 1e-10


def graded_lex_key(k):
    """Sort key: total degree first, then lexicographic."""
    return (sum(k), tuple(k))


def _as_index(k, dim=None):
    kk = tuple(int(v) for v in k)
    if any(v < 0 for v in kk):
        raise ValueError(f"multi-index must be non-negative, got {kk}")
    if dim is not None and len(kk) != dim:
        raise DimensionMismatch(f"multi-index {kk} has length {len(kk)}, expected {dim}")
    return kk


class MultiIndexPolynomial:
    """Polynomial in d variables as a sparse {multi-index: coefficient} map.

    The term map is canonical: coefficients that are exactly zero are never
    stored.  Instances are treated as immutable; arithmetic returns new
    objects.  Calling the polynomial evaluates it, broadcasting over point
    arrays of shape (..., d).
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms=None):
        dim = int(dim)
        if dim < 1:
            raise ValueError("dim must be at least 1")
        self.dim = dim
        clean = {}
        if terms:
            for k, c in terms.items():
                c = complex(c)
                if c != 0:
                    clean[_as_index(k, dim)] = c
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, dim, value=1.0):
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def monomial(cls, dim, k, coeff=1.0):
        return cls(dim, {tuple(k): coeff})

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = MultiIndexPolynomial.constant(self.dim, other)
        if self.dim != other.dim:
            raise DimensionMismatch("polynomial dimensions differ")
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0j) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return MultiIndexPolynomial(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiIndexPolynomial(self.dim, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = MultiIndexPolynomial.constant(self.dim, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return MultiIndexPolynomial(
                self.dim, {k: c * other for k, c in self.terms.items()}
            )
        if self.dim != other.dim:
            raise DimensionMismatch("polynomial dimensions differ")
        out = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                out[k] = out.get(k, 0j) + ca * cb
        return MultiIndexPolynomial(self.dim, out)

    __rmul__ = __mul__

    def diff(self, axis):
        """Partial derivative along one axis."""
        if not 0 <= axis < self.dim:
            raise AxisOutOfRange(f"axis {axis} out of range for dim {self.dim}")
        out = {}
        for k, c in self.terms.items():
            if k[axis] > 0:
                kd = k[:axis] + (k[axis] - 1,) + k[axis + 1 :]
                out[kd] = out.get(kd, 0j) + c * k[axis]
        return MultiIndexPolynomial(self.dim, out)

    def mul_var(self, axis):
        """Multiply by the coordinate x_axis."""
        if not 0 <= axis < self.dim:
            raise AxisOutOfRange(f"axis {axis} out of range for dim {self.dim}")
        return MultiIndexPolynomial(
            self.dim,
            {k[:axis] + (k[axis] + 1,) + k[axis + 1 :]: c for k, c in self.terms.items()},
        )

    # -- queries -------------------------------------------------------------

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(k) for k in self.terms), default=-1)

    def coefficient(self, k):
        return self.terms.get(_as_index(k, self.dim), 0j)

    def sorted_terms(self):
        """Terms as (multi-index, coefficient) pairs in graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: graded_lex_key(kv[0]))

    def __len__(self):
        return len(self.terms)

    def __call__(self, x):
        """Evaluate at points of shape (..., d); exact for integer inputs.

        Monomials are assembled from cached per-axis integer powers built by
        repeated multiplication, so integer-coefficient polynomials evaluated
        at integer points stay exact.
        """
        x = np.asarray(x)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            # univariate convenience: any shape is a point array
            x = x[..., None]
        if x.shape[-1] != self.dim:
            raise DimensionMismatch(
                f"points have last axis {x.shape[-1]}, polynomial dim is {self.dim}"
            )
        base = np.zeros(x.shape[:-1], dtype=complex)
        if not self.terms:
            return base
        # cached powers: powers[i][p] = x_i ** p, built incrementally
        powers = [{0: np.ones(x.shape[:-1], dtype=x.dtype if x.dtype.kind == "c" else complex)}
                  for _ in range(self.dim)]

        def axis_power(i, p):
            cache = powers[i]
            if p not in cache:
                q = max(cache)
                xi = x[..., i]
                while q < p:
                    cache[q + 1] = cache[q] * xi
                    q += 1
            return cache[p]

        for k, c in self.terms.items():
            mono = None
            for i, p in enumerate(k):
                if p == 0:
                    continue
                mono = axis_power(i, p) if mono is None else mono * axis_power(i, p)
            base = base + c * (mono if mono is not None else 1)
        return base

    def __repr__(self):
        return f"MultiIndexPolynomial(dim={self.dim}, terms={len(self.terms)})"


def coefficient_distance(a, b):
    """Max absolute coefficient difference between two polynomials."""
    if a.dim != b.dim:
        raise DimensionMismatch("polynomial dimensions differ")
    keys = set(a.terms) | set(b.terms)
    return max((abs(a.terms.get(k, 0j) - b.terms.get(k, 0j)) for k in keys), default=0.0)


def evaluate(q, x):
    """Functional form of polynomial evaluation (same as calling ``q``)."""
    return q(x)


# -- parameter matrix checks -------------------------------------------------

def _check_symmetric(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"M must be square, got shape {M.shape}")
    asym = np.linalg.norm(M - M.T)
    if asym > SYMMETRY_TOL * max(1.0, np.linalg.norm(M)):
        raise AsymmetricM(f"M asymmetry {asym:.3e} beyond tolerance")
    return M


# -- route 1: the recursion table ---------------------------------------------

class PolynomialTable:
    """All q_k for k below a componentwise cap, generated by the recursion.

    Entries are generated in graded-lexicographic order; each new index is
    reached by raising the lexicographically smallest axis of its
    predecessor.  ``table[k]`` looks an entry up, iteration runs in graded-lex
    order.
    """

    __slots__ = ("M", "kmax", "total_degree", "entries")

    def __init__(self, M, kmax, total_degree, entries):
        self.M = M
        self.kmax = kmax
        self.total_degree = total_degree
        self.entries = entries

    def __getitem__(self, k):
        return self.entries[_as_index(k)]

    def __contains__(self, k):
        return _as_index(k) in self.entries

    def __len__(self):
        return len(self.entries)

    def indices(self):
        return sorted(self.entries, key=graded_lex_key)

    def __repr__(self):
        return f"PolynomialTable(dim={self.M.shape[0]}, entries={len(self.entries)})"


def ttrr_generate(M, kmax, total_degree=None):
    """Tabulate q_k for all k <= kmax componentwise (optionally |k| capped).

    Parameters
    ----------
    M : array_like, shape (d, d)
        Complex symmetric parameter matrix.
    kmax : int or sequence of int
        Componentwise cap, at most 32 per axis.
    total_degree : int, optional
        Additional cap on |k|, at most 40; defaults to the cap implied by
        ``kmax``.

    Returns
    -------
    PolynomialTable
    """
    M = _check_symmetric(M)
    d = M.shape[0]
    if np.isscalar(kmax):
        kmax = (int(kmax),) * d
    kmax = _as_index(kmax, d)
    if any(v > KMAX_AXIS for v in kmax):
        raise ValueError(f"kmax per axis capped at {KMAX_AXIS}, got {kmax}")
    if total_degree is None:
        total_degree = min(sum(kmax), KMAX_TOTAL)
    total_degree = int(total_degree)
    if total_degree > KMAX_TOTAL:
        raise ValueError(f"total degree capped at {KMAX_TOTAL}, got {total_degree}")

    indices = [
        k
        for k in np.ndindex(*(v + 1 for v in kmax))
        if sum(k) <= total_degree
    ]
    indices.sort(key=graded_lex_key)

    entries = {}
    for k in indices:
        k = tuple(int(v) for v in k)
        if sum(k) == 0:
            entries[k] = MultiIndexPolynomial.constant(d, 1.0)
            continue
        j = next(i for i, v in enumerate(k) if v > 0)
        km = k[:j] + (k[j] - 1,) + k[j + 1 :]
        q = 2.0 * entries[km].mul_var(j)
        for i in range(d):
            if km[i] > 0 and M[j, i] != 0:
                ki = km[:i] + (km[i] - 1,) + km[i + 1 :]
                q = q - (2.0 * M[j, i] * km[i]) * entries[ki]
        entries[k] = q
    return PolynomialTable(M, kmax, total_degree, entries)


# -- univariate families -------------------------------------------------------

def univariate_hermite(lam, n):
    """Deformed Hermite polynomial H^lambda_n as a 1-variable polynomial.

    Recursion H^lambda_{n+1} = 2x H^lambda_n - 2 lambda n H^lambda_{n-1} with
    H^lambda_0 = 1.  lambda = 1 gives the physicists' Hermite polynomials,
    lambda = 0 the monomials (2x)^n, and for lambda > 0

        H^lambda_n(x) = lambda^{n/2} H^1_n(x / sqrt(lambda)).
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    lam = complex(lam)
    prev = MultiIndexPolynomial.constant(1, 1.0)
    if n == 0:
        return prev
    cur = MultiIndexPolynomial(1, {(1,): 2.0})
    for m in range(1, n):
        nxt = 2.0 * cur.mul_var(0) - (2.0 * lam * m) * prev
        prev, cur = cur, nxt
    return cur


def laguerre(n, alpha):
    """Generalised Laguerre polynomial L^(alpha)_n, explicit binomial sum.

    L^(alpha)_n(x) = sum_{j=0}^{n} C(n+alpha, n-j) (-x)^j / j!  with integer
    n, alpha >= 0 (supported up to 64).
    """
    n, alpha = int(n), int(alpha)
    if n < 0 or alpha < 0:
        raise ValueError("n and alpha must be non-negative")
    if n > 64 or alpha > 64:
        raise ValueError("n and alpha supported up to 64")
    terms = {}
    for j in range(n + 1):
        terms[(j,)] = (-1) ** j * math.comb(n + alpha, n - j) / math.factorial(j)
    return MultiIndexPolynomial(1, terms)


# -- route 2: generating function ---------------------------------------------

def _mul_truncated(a, b, bound, total):
    """Sparse product keeping exponents <= bound componentwise and |k| <= total."""
    out = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if sum(k) > total or any(x > y for x, y in zip(k, bound)):
                continue
            out[k] = out.get(k, 0j) + ca * cb
    return MultiIndexPolynomial(a.dim, out)


def genfunc_coefficient(M, k):
    """q_k extracted from the generating function exp(2 x.t - t.M t).

    The coefficient of t^k is assembled by multinomial arithmetic: the series
    of exp(-t.M t) is built by repeated truncated multiplication of the
    quadratic form, then convolved with the exponential factor
    exp(2 x.t) = sum (2x)^a t^a / a!.  Independent of the recursion; quadratic
    cost in the table size, intended as an oracle.
    """
    M = _check_symmetric(M)
    d = M.shape[0]
    k = _as_index(k, d)
    total = sum(k)

    # truncated series of exp(-t.M t) in the t variables
    quad_terms = {}
    for i in range(d):
        if M[i, i] != 0:
            e = [0] * d
            e[i] = 2
            quad_terms[tuple(e)] = -M[i, i]
    for i in range(d):
        for j in range(i + 1, d):
            if M[i, j] != 0:
                e = [0] * d
                e[i] += 1
                e[j] += 1
                quad_terms[tuple(e)] = -2.0 * M[i, j]
    quad = MultiIndexPolynomial(d, quad_terms)

    series = MultiIndexPolynomial.constant(d, 1.0)
    power = MultiIndexPolynomial.constant(d, 1.0)
    for m in range(1, total // 2 + 1):
        power = _mul_truncated(power, quad, k, total) * (1.0 / m)
        if not power.terms:
            break
        series = series + power

    # q_k = k! sum_b series_b 2^{|k-b|} x^{k-b} / (k-b)!
    out = {}
    for b, cb in series.terms.items():
        if any(x > y for x, y in zip(b, k)):
            continue
        a = tuple(x - y for x, y in zip(k, b))
        scale = 1.0
        for ki, ai in zip(k, a):
            scale *= math.factorial(ki) // math.factorial(ai)  # k_i! / a_i! exact
        out[a] = out.get(a, 0j) + cb * scale * 2.0 ** sum(a)
    return MultiIndexPolynomial(d, out)


# -- route 3: ladder operators -------------------------------------------------

def raise_index(M, q, j):
    """Apply the j-th raising component (b+ q)_j = 2 x_j q - (M grad q)_j.

    Sends q_k to q_{k+e_j}.
    """
    M = _check_symmetric(M)
    if q.dim != M.shape[0]:
        raise DimensionMismatch("polynomial dim does not match M")
    if not 0 <= j < q.dim:
        raise AxisOutOfRange(f"axis {j} out of range for dim {q.dim}")
    out = 2.0 * q.mul_var(j)
    for i in range(q.dim):
        if M[j, i] != 0:
            out = out - M[j, i] * q.diff(i)
    return out


def gradient_lower(q, k, j):
    """Recover q_{k-e_j} from q_k via grad q_k = 2 (k_j q_{k-e_j})_j.

    Returns the zero polynomial when k_j = 0.
    """
    k = _as_index(k, q.dim)
    if not 0 <= j < q.dim:
        raise AxisOutOfRange(f"axis {j} out of range for dim {q.dim}")
    if k[j] == 0:
        return MultiIndexPolynomial(q.dim)
    return q.diff(j) * (1.0 / (2.0 * k[j]))


def apply_counting_operator(M, q, j):
    """Apply T_j = (1 + 2 x_j d_j) - d_j (M grad)_j.

    Each q_k is an eigenvector with eigenvalue 2 k_j + 1, which is how the
    tests pin the operator down.
    """
    M = _check_symmetric(M)
    if q.dim != M.shape[0]:
        raise DimensionMismatch("polynomial dim does not match M")
    if not 0 <= j < q.dim:
        raise AxisOutOfRange(f"axis {j} out of range for dim {q.dim}")
    out = q + 2.0 * q.diff(j).mul_var(j)
    inner = MultiIndexPolynomial(q.dim)
    for i in range(q.dim):
        if M[j, i] != 0:
            inner = inner + M[j, i] * q.diff(i)
    return out - inner.diff(j)


# -- route 4: Laguerre contraction ----------------------------------------------

def laguerre_reduce(M, k, n, m):
    """Contract the index pair (n, m) of q_k into a Laguerre sum.

    For k_n >= k_m and lambda = M_{nm} != 0,

        q_k = (c+)^{k'} sum_{j=0}^{k_m} k_n! k_m! (-2 lambda)^j
              / (j! (k_n-j)! (k_m-j)!) (c+_n)^{k_n-j} (c+_m)^{k_m-j} 1,

    where c+ is the raising operator of the matrix with the (n, m) pair
    zeroed out and k' = k with components n, m removed.  The order of the two
    axes is normalised internally, so only lambda != 0 is required.
    """
    M = _check_symmetric(M)
    d = M.shape[0]
    k = _as_index(k, d)
    n, m = int(n), int(m)
    if not (0 <= n < d and 0 <= m < d) or n == m:
        raise AxisOutOfRange(f"need two distinct axes in range, got ({n}, {m})")
    lam = M[n, m]
    if lam == 0:
        raise ZeroOffdiagonal(f"M[{n},{m}] is zero, nothing to contract")
    if k[n] < k[m]:
        n, m = m, n
    kn, km = k[n], k[m]

    Mr = M.copy()
    Mr[n, m] = 0.0
    Mr[m, n] = 0.0

    # powers[(a, b)] = (c+_n)^a (c+_m)^b applied to 1
    one = MultiIndexPolynomial.constant(d, 1.0)
    col = [one]
    for a in range(1, kn + 1):
        col.append(raise_index(Mr, col[-1], n))
    powers = {}
    for a, base in enumerate(col):
        powers[(a, 0)] = base
        for b in range(1, km + 1):
            powers[(a, b)] = raise_index(Mr, powers[(a, b - 1)], m)

    total = MultiIndexPolynomial(d)
    for j in range(min(kn, km) + 1):
        c = (
            math.factorial(kn)
            * math.factorial(km)
            / (math.factorial(j) * math.factorial(kn - j) * math.factorial(km - j))
        )
        total = total + (c * (-2.0 * lam) ** j) * powers[(kn - j, km - j)]

    for axis in range(d):
        if axis in (n, m):
            continue
        for _ in range(k[axis]):
            total = raise_index(Mr, total, axis)
    return total


# -- route 5: full Hermite tensor expansion -------------------------------------

def _embed_univariate(p, dim, axis):
    """Place a 1-variable polynomial on one axis of a d-variable ring."""
    terms = {}
    for (n,), c in p.terms.items():
        e = [0] * dim
        e[axis] = n
        terms[tuple(e)] = c
    return MultiIndexPolynomial(dim, terms)


def tensor_expand(M, k):
    """Expand q_k over all off-diagonal pairs into H^lambda products.

    With pairs (a_j, b_j), lambda_j = M_{a_j b_j} != 0 enumerated over the
    strict upper triangle,

        q_k = sum_l  prod_j (-2 lambda_j)^{l_j} / l_j!
                     prod_i k_i! / (k_i - (E l)_i)!
                     prod_i H^{M_ii}_{k_i - (E l)_i}(x_i),

    where column j of E is e_{a_j} + e_{b_j} and any negative Hermite index
    kills the summand.  The coefficient follows from factoring the
    exponential generating function into per-axis and per-pair parts; it
    also arises by iterating the one-pair Laguerre contraction, whose
    binomials draw from the progressively reduced indices (using the
    original k there is wrong as soon as two pairs share an axis).  Fully
    independent of the recursion; cost grows with the number of
    off-diagonal pairs.
    """
    M = _check_symmetric(M)
    d = M.shape[0]
    k = _as_index(k, d)

    pairs = [
        (i, j)
        for i in range(d)
        for j in range(i + 1, d)
        if M[i, j] != 0
    ]
    lams = [M[i, j] for i, j in pairs]

    hermite_cache = {}

    def hermite(axis, n):
        key = (axis, n)
        if key not in hermite_cache:
            hermite_cache[key] = _embed_univariate(
                univariate_hermite(M[axis, axis], n), d, axis
            )
        return hermite_cache[key]

    total = MultiIndexPolynomial(d)
    bounds = [min(k[a], k[b]) for a, b in pairs]
    for l in np.ndindex(*(b + 1 for b in bounds)) if pairs else [()]:
        resid = list(k)
        coeff = 1.0 + 0j
        for lj, (a, b), lam in zip(l, pairs, lams):
            resid[a] -= lj
            resid[b] -= lj
            coeff *= (-2.0 * lam) ** lj / math.factorial(lj)
        if any(r < 0 for r in resid):
            continue
        for ki, ni in zip(k, resid):
            coeff *= math.factorial(ki) // math.factorial(ni)
        prod = MultiIndexPolynomial.constant(d, coeff)
        for i in range(d):
            if resid[i] > 0:
                prod = prod * hermite(i, resid[i])
        total = total + prod
    return total


# -- JSON interchange ------------------------------------------------------------

def poly_to_json(q):
    """Terms as a JSON array of {"k", "re", "im"}, graded-lex sorted."""
    return [
        {"k": list(k), "re": float(c.real), "im": float(c.imag)}
        for k, c in q.sorted_terms()
    ]


def poly_from_json(obj, dim=None):
    terms = {}
    for entry in obj:
        k = tuple(int(v) for v in entry["k"])
        terms[k] = complex(float(entry["re"]), float(entry["im"]))
    if dim is None:
        if not terms:
            raise ValueError("cannot infer dimension of an empty polynomial")
        dim = len(next(iter(terms)))
    return MultiIndexPolynomial(dim, terms)
