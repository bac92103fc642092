"""Walks on the rotation group SO(3).

No finite group here, so convergence is read off moment operators
T = E[R]: the walk's moments are T^n.  Three walks.
"""
import math

import numpy as np

import groupwalk as gw
from groupwalk.matrix_walk import MatrixMeasure, moment_power_norm, rotation

# two turns by 2pi/7 about skew axes generate a dense subgroup; T^n -> 0
tilt = (math.sin(1.0), 0.0, math.cos(1.0))
dense = MatrixMeasure.finite([rotation((0, 0, 1), 2 * math.pi / 7), rotation(tilt, 2 * math.pi / 7)], [0.5, 0.5])
T = dense.mean(1)
for n in (1, 10, 50, 100, 200):
    print(n, round(moment_power_norm(T, n), 5))
print(gw.moment_check(dense).converges)

# half turn about x, then a uniform turn about z.  Every step lands in the
# coset X*H of the z-circle H, and X normalizes H: period two.
X = MatrixMeasure.finite([rotation((1, 0, 0), math.pi)], [1.0])
coset = MatrixMeasure.product(X, MatrixMeasure.axis_rotation((0, 0, 1)))
print(np.round(coset.mean(1).real, 3) + 0.0)  # diag(0, 0, -1)
for n in range(10, 14):
    est = gw.estimate_moment(coset, n, 10_000, seed=1)
    print(n, round(est.matrix[2, 2].real, 3), "+/-", round(est.standard_error.max(), 4))

# finite atoms: the fifth turn closes up to a cyclic group of order 5,
# which then goes through the exact finite-group analysis
fifth = MatrixMeasure.finite([rotation((0, 0, 1), 2 * math.pi / 5)], [1.0])
orbit = gw.classify_finite_orbit(fifth)
print(orbit.group.order, gw.detect_obstruction(orbit.distribution(fifth)).period)
