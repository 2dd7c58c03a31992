"""Figure data for the wave packet gallery.

Writes |phi| grids on [-2, 2]^2 at eps = 0.1 as CSV files into
demos/output/.  The four panels:

  packet_Z1_k46.csv   rotated Hermite product, 4 x 6 nodal lines
  packet_Z2_k76.csv   circular Laguerre structure, 6 radial rings
  packet_Z3_k65.csv   squeezed mixed case
  packet_Z2_Z3_k37.csv  two-frame generalised packet

Plot re/im/abs columns against (x1, x2) with any contouring tool.
"""

import os

import numpy as np

from hagedorn import fixtures
from hagedorn.wavepackets import (
    GridJob,
    QuadratureSpec,
    grid_eval,
    gram_matrix,
    inner_product,
    wave_packet,
    write_grid_csv,
)

EPS = 0.1
OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

panels = [
    ("packet_Z1_k46.csv", fixtures.Z1, None, (4, 6)),
    ("packet_Z2_k76.csv", fixtures.Z2, None, (7, 6)),
    ("packet_Z3_k65.csv", fixtures.Z3, None, (6, 5)),
    ("packet_Z2_Z3_k37.csv", fixtures.Z2, fixtures.Z3, (3, 7)),
]

# these excitations are high enough that the default 150-node rule refuses
# to integrate them; 900 nodes per axis resolves every panel
quad = QuadratureSpec(nodes_per_axis=900)

for fname, zf, yf, k in panels:
    spec = wave_packet(zf, k, EPS, yf=yf)
    job = grid_eval(spec, GridJob([-2.0, -2.0], [2.0, 2.0], [201, 201]))
    path = os.path.join(OUT, fname)
    with open(path, "w") as fh:
        write_grid_csv(job, fh)
    peak = np.abs(job.values).max()
    norm = inner_product(spec, spec, quad=quad).real
    tag = f"[{('%s,%s' % k)}]" + ("" if yf is None else " two-frame")
    print(f"{fname}: peak |phi| = {peak:.4f}, <phi,phi> = {norm:.6f} {tag}")

# one-frame packets of a common frame are orthonormal; the two-frame
# packet is not normalised, which the norms above show directly
idx = [(0, 0), (1, 0), (0, 1), (1, 1)]
specs = [wave_packet(fixtures.Z2, k, EPS) for k in idx]
G = gram_matrix(specs)
print(f"\nGram deviation from identity (Z2, first four states): "
      f"{np.abs(G - np.eye(4)).max():.2e}")
