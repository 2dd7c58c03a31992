"""Tour of the built-in Lagrangian frames and their symplectic metrics."""

import numpy as np

from hagedorn import fixtures
from hagedorn.frames import (
    omega,
    random_normalised_frame,
    recursion_matrix,
    symplectic_metric,
    validate_frame,
)

print("fixture frames")
print("--------------")
for name, f in fixtures.FRAMES.items():
    print(f"{name}: d={f.dim}  isotropy={f.isotropy_residual:.2e}  "
          f"normalisation={f.normalisation_residual:.2e}")

# each fixture frame reproduces its companion matrix as Q^-1 conj(Q)
print()
for zname, mname in fixtures.MATCHED.items():
    f = fixtures.FRAMES[zname]
    M = np.linalg.solve(f.Q, f.Q.conj())
    err = np.abs(M - fixtures.MATRICES[mname]).max()
    print(f"{zname}: Q^-1 conj(Q) = {mname}  (err {err:.2e})")

print()
print("symplectic metrics")
print("------------------")
for name, f in fixtures.FRAMES.items():
    G = symplectic_metric(f)
    O = omega(f.dim)
    ev = np.linalg.eigvalsh(G)
    print(f"G[{name}] eigenvalues: {np.array2string(ev, precision=6)}")
    print(f"   symplectic residual |G O G^T - O| = {np.abs(G @ O @ G.T - O).max():.2e}")

# the first two metrics are the identity, the third is genuinely squeezed;
# its eigenvalues have closed forms
s = np.sqrt(2.0)
expected = sorted([(2 - s) / 4, (2 + s) / 4, 4 + 2 * s, 4 - 2 * s])
got = np.sort(np.linalg.eigvalsh(symplectic_metric(fixtures.Z3)))
print(f"Z3 closed-form eigenvalue check: {np.abs(got - expected).max():.2e}")

print()
print("random frames")
print("-------------")
rng = np.random.default_rng(3)
f = random_normalised_frame(3, rng)
print(f"random d=3 frame: isotropy={f.isotropy_residual:.2e} "
      f"normalisation={f.normalisation_residual:.2e}")

# the metric is invariant under right multiplication by any unitary
from hagedorn.frames import haar_unitary

U = haar_unitary(3, rng)
g = validate_frame(f.Q @ U, f.P @ U)
print(f"metric unitary invariance: "
      f"{np.abs(symplectic_metric(f) - symplectic_metric(g)).max():.2e}")

# two random frames give a symmetric recursion matrix
za = random_normalised_frame(2, rng)
yb = random_normalised_frame(2, rng)
M = recursion_matrix(za, yb)
print(f"recursion matrix symmetry (two random frames): {np.abs(M - M.T).max():.2e}")
