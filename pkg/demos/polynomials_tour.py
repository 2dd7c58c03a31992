"""The matrix-parametrised Hermite family: recursion, ladders, closed forms."""

import numpy as np

from hagedorn import fixtures
from hagedorn.polys import (
    apply_counting_operator,
    coefficient_distance,
    genfunc_coefficient,
    laguerre,
    laguerre_reduce,
    raise_index,
    tensor_expand,
    ttrr_generate,
    univariate_hermite,
)

# identity matrix: plain products of physicists' Hermite polynomials
table = ttrr_generate(fixtures.M1, (3, 3))
print("q_(2,2) for the identity matrix:")
for k, c in table[(2, 2)].sorted_terms():
    print(f"   x^{k}: {c.real:+.1f}")
print("(equals H_2(x1) H_2(x2))")

# exchange matrix: the lowest mixed entry picks up a cross term
table = ttrr_generate(fixtures.M2, (7, 6))
print("\nq_(1,1) for the exchange matrix:")
for k, c in table[(1, 1)].sorted_terms():
    print(f"   x^{k}: {c.real:+.1f}")

# the (7,6) entry collapses to a single generalised Laguerre polynomial:
# 6! 2^7 x1 L^(1)_6(2 x1 x2)
q = table[(7, 6)]
L = laguerre(6, 1)
rng = np.random.default_rng(0)
pts = rng.uniform(-1.5, 1.5, size=(200, 2))
ref = 720.0 * 2.0**7 * pts[:, 0] * L(2.0 * pts[:, 0] * pts[:, 1])
err = np.abs(q(pts) - ref).max() / 2.0**13
print(f"\nq_(7,6) vs 6! 2^7 x1 L^(1)_6(2 x1 x2): rel err {err:.2e}")

# four independent routes to the same polynomial
M = fixtures.M3
table = ttrr_generate(M, (5, 4))
k = (5, 4)
q = table[k]
print(f"\nfour routes to q_{k} for the mixed fixture matrix")
print(f"   recursion vs generating function: "
      f"{coefficient_distance(q, genfunc_coefficient(M, k)):.2e}")
print(f"   recursion vs tensor expansion:    "
      f"{coefficient_distance(q, tensor_expand(M, k)):.2e}")
print(f"   recursion vs Laguerre contraction: "
      f"{coefficient_distance(q, laguerre_reduce(M, k, 0, 1)):.2e}")

# ladder structure: raising from 1 rebuilds the table, the counting
# operator has q_k as an eigenvector with eigenvalue 2 k_j + 1
from hagedorn.polys import MultiIndexPolynomial

p = MultiIndexPolynomial.constant(2, 1.0)
for j, times in [(0, 2), (1, 1)]:
    for _ in range(times):
        p = raise_index(M, p, j)
print(f"\nraising (b+)^(2,1) applied to 1 vs table: "
      f"{coefficient_distance(p, table[(2, 1)]):.2e}")

for j in (0, 1):
    lhs = apply_counting_operator(M, q, j)
    err = coefficient_distance(lhs, (2 * k[j] + 1.0) * q)
    print(f"counting operator axis {j}: eigenvalue {2 * k[j] + 1}, residual {err:.2e}")

# rescaling: H^lam_n(x) = lam^(n/2) H_n(x / sqrt(lam)) for lam > 0
lam = 2.5
xs = np.linspace(-2, 2, 7)
h = univariate_hermite(lam, 4)
ref = lam**2 * univariate_hermite(1.0, 4)(xs / np.sqrt(lam))
print(f"\nrescaling law at lambda={lam}: {np.abs(h(xs) - ref).max():.2e}")
