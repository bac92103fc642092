"""Distance to uniform decays like the second eigenvalue modulus.

The transition operator T[x, x*a] = p(a) has 1 as an eigenvalue; the next
largest modulus sets the geometric rate of the decay trace.
"""
import numpy as np

import groupwalk as gw
from groupwalk.spectral import estimate_second_modulus

rng = np.random.default_rng(5)
S4 = gw.symmetric(4)

w = rng.integers(1, 10, size=S4.order).astype(float)
w[rng.random(S4.order) < 0.7] = 0  # sparse support
w[S4.index_of("(0 1)")] += 1
w[S4.index_of("(0 1 2 3)")] += 1
p = gw.Distribution(S4, w / w.sum())

s = gw.spectrum(gw.transition_operator(p))
print("support size", len(p.support()))
print("top moduli", np.round(np.abs(s.eigenvalues[:4]), 4))
print("second modulus", round(s.second_modulus, 6))

trace = gw.decay_trace(p, 400)
for n in (1, 10, 50, 100, 200, 400):
    print(n, trace[n - 1][1])

# fitted rate from the tail of a long trace
print("fitted", round(estimate_second_modulus(p), 6))

# eigenvalues decide convergence too, away from the unit-circle boundary
print(gw.spectral_verdict(p))
