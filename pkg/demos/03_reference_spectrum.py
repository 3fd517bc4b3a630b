"""
Finite-difference reference levels
==================================

An independent check: a 3-point discretization on [-5, 5], Sturm-count
bisection for the lowest 20 eigenvalues and one Richardson step.
"""

import time

import numpy as np

from qesvar import QesModel
from qesvar.reference import count_sign_changes, discretize, inverse_iteration, reference_spectrum

model = QesModel.double_well()

t0 = time.perf_counter()
ref = reference_spectrum(model, k_max=20)
print(f"{time.perf_counter() - t0:.1f} s")

for k, E in enumerate(ref.eigenvalues):
    print(f"{k:3d} {E:16.9f}")

# exact levels come back to about 1e-7
print(np.abs(ref.eigenvalues[[0, 2, 4]] - [-8, 0, 8]))

# index k is the node count; spot-check with eigenvectors
sys = discretize(model, 5.0, 2000)
print([count_sign_changes(inverse_iteration(sys, E)) for E in ref.eigenvalues[:6]])
