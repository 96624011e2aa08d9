"""Minimal sup-norm interpolation: Taylor data (Schur) and point data (Pick).

Both minimizers are constant multiples of Blaschke products of degree at
most n - 1, so their modulus on the circle is flat.
"""

import numpy as np

from hardyapprox import PickProblem, pick_minimal, schur_minimal

for a in ([2.0], [0, 1], [1, 1], [1, 0.5, -0.25j]):
    r = schur_minimal(a)
    print(f"Schur a={a}: sigma={r.sigma:.12f}  zeros={np.round(r.blaschke_zeros, 6)}  "
          f"flatness={r.allpass_deviation:.1e}")

problems = [([0], [0.7j]), ([0, 0.5], [0, 0.3]), ([0, 0.5], [0.3, 0.3]),
            ([0.2, -0.5j, 0.6 + 0.1j], [0.1, 0.5, -0.3j])]
for z, w in problems:
    r = pick_minimal(PickProblem(z, w))
    d = r.diagnostics
    print(f"Pick nodes={z}: sigma={r.sigma:.10f}  Hankel sigma={d['sigma_nehari']:.10f}  "
          f"degree={len(r.blaschke_zeros)}  interp err={d['interpolation_error']:.1e}")
