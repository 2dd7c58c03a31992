"""Built-in reference frames and recursion matrices.

Three 2 x 2 recursion matrices and three matching frames in dimension 2,
chosen so that Q^{-1} conj(Q) of the j-th frame equals the j-th matrix:

* M1 = Id                        with Z1, a rotated standard frame (its Q is
  real orthogonal), giving rotated Hermite products;
* M2 = [[0, 1], [1, 0]]          with Z2, giving Laguerre-type circular
  structure;
* M3 = (1/sqrt 2) [[1, 1], [1, -1]]  with Z3, a mixed case.

All entries are closed-form expressions evaluated in double precision, and
the frames pass validation at import time.
"""

import math

import numpy as np

from .frames import validate_frame

_SQRT2 = math.sqrt(2.0)

M1 = np.eye(2, dtype=complex)
M1.flags.writeable = False

M2 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
M2.flags.writeable = False

M3 = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / _SQRT2
M3.flags.writeable = False

_Q1 = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / _SQRT2
Z1 = validate_frame(_Q1, 1j * _Q1)

_Q2 = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2.0
_P2 = np.array([[1j - 1, 1j + 1], [1j + 1, 1j - 1]], dtype=complex) / 2.0
Z2 = validate_frame(_Q2, _P2)

_Q3 = np.array([[1j, -1j * (1 + _SQRT2)], [1.0, _SQRT2 - 1]], dtype=complex)
_P3 = np.array(
    [
        [(1 - _SQRT2) / (2 * _SQRT2), 1 / (2 * _SQRT2)],
        [1j * (1 + _SQRT2) / (2 * _SQRT2), 1j / (2 * _SQRT2)],
    ],
    dtype=complex,
)
Z3 = validate_frame(_Q3, _P3)

FRAMES = {"Z1": Z1, "Z2": Z2, "Z3": Z3}
MATRICES = {"M1": M1, "M2": M2, "M3": M3}

#: frame paired with the matrix its Q^{-1} conj(Q) reproduces
MATCHED = {"Z1": "M1", "Z2": "M2", "Z3": "M3"}
