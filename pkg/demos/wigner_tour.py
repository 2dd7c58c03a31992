"""Wigner transforms as doubled-dimension wave packets.

The closed form evaluates the transform pointwise with no integration;
the direct oscillatory quadrature confirms it.  Output CSVs land in
demos/output/.
"""

import math
import os

import numpy as np

from hagedorn import fixtures
from hagedorn.frames import random_normalised_frame, validate_frame
from hagedorn.phasespace import (
    lift_frame,
    lift_pair,
    wigner_closed,
    wigner_factorized,
    wigner_grid,
    wigner_integral,
    wigner_quadrature,
    wigner_spec,
)
from hagedorn.wavepackets import GridJob, write_grid_csv

EPS = 0.1
OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

# lifting a frame doubles the dimension and stays in the frame class
f = fixtures.Z2
lf = lift_frame(f)
print(f"lift of Z2: d=2 -> {lf.frame.dim}, worst identity residual "
      f"{max(lf.residuals.values()):.2e}")
lp = lift_pair(f)
print(f"equal-frame lifted recursion matrix is the exchange: "
      f"{lp.residuals['special']:.2e}")

# d=1: closed form against the oscillatory integral at a few points
std = validate_frame(np.eye(1), 1j * np.eye(1))
rng = np.random.default_rng(12)
za = random_normalised_frame(1, rng)
yb = random_normalised_frame(1, rng)
spec = wigner_spec(za, (2,), (1,), EPS, yf=yb)
print("\nclosed form vs quadrature, d=1 two-frame pair:")
for z in rng.uniform(-0.8, 0.8, size=(3, 2)):
    c = complex(wigner_closed(spec, z))
    q = wigner_quadrature(za, yb, (2,), (1,), EPS, z)
    print(f"   z=({z[0]:+.3f},{z[1]:+.3f})  closed={c:+.6f}  "
          f"|closed-quad|={abs(c - q):.2e}")

# the ground transform peaks at (pi eps)^-d and integrates to one
spec = wigner_spec(std, (0,), (0,), EPS)
peak = complex(wigner_closed(spec, np.zeros(2))).real
print(f"\nground-state peak: {peak:.6f}  (expect {(math.pi * EPS) ** -1:.6f})")
print(f"total mass: {wigner_integral(spec):+.8f}")

# diagonal transforms are real with signed rings; off-diagonal ones carry
# the overlap structure and integrate to zero
for k, l in [((1,), (1,)), ((2,), (0,))]:
    spec = wigner_spec(std, k, l, EPS)
    print(f"mass of W_{k + l}: {wigner_integral(spec):+.2e}")

# equal frames factorise into products of Laguerre-type factors
f = fixtures.Z2
zz = rng.uniform(-1, 1, size=(5, 4))
spec = wigner_spec(f, (2, 1), (2, 1), EPS)
c = wigner_closed(spec, zz)
g = wigner_factorized(f, (2, 1), (2, 1), EPS, zz)
print(f"\nfactorised route agreement (Z2, k=l=(2,1)): {np.abs(c - g).max():.2e}")
print(f"diagonal transform is real: max |Im| = {np.abs(c.imag).max():.2e}")

# phase-space grid of the first excited transform for plotting
spec = wigner_spec(std, (1,), (1,), EPS)
job = wigner_grid(spec, GridJob([-1.5, -1.5], [1.5, 1.5], [121, 121]))
path = os.path.join(OUT, "wigner_std_k1l1.csv")
with open(path, "w") as fh:
    write_grid_csv(job, fh, var_names=["q1", "p1"])
vals = job.values.real.reshape(121, 121)
print(f"\nwigner_std_k1l1.csv written: min {vals.min():.3f} (negative ring), "
      f"max {vals.max():.3f}")
