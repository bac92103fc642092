"""Random transpositions on a deck of five cards.

Swap two random cards, or (lazily) leave the deck alone with probability
1/n.  Without the lazy move every shuffle flips the sign of the permutation
and the deck never mixes.
"""
from fractions import Fraction
from itertools import combinations

import groupwalk as gw

n = 5
G = gw.symmetric(n)
swaps = [f"({i} {j})" for i, j in combinations(range(n), 2)]

strict = gw.Distribution.from_pairs(G, [(s, Fraction(1, len(swaps))) for s in swaps], exact=True)
obs = gw.detect_obstruction(strict)
print("no lazy move: period", obs.period, "H* order", obs.subgroup.order)  # the even permutations

lazy_pairs = [("()", Fraction(1, n))] + [(s, Fraction(n - 1, n * len(swaps))) for s in swaps]
lazy = gw.Distribution.from_pairs(G, lazy_pairs, exact=True)
print(type(gw.verdict(lazy)).__name__)

# steps until the deck is within 1/4 of uniform in total variation
trace = gw.decay_trace(lazy.as_float(), 60)
t_mix = next(k for k, d in trace if d < 0.25)
print("mixing time (tv < 1/4):", t_mix)
for k in (1, 2, 4, 8, 16):
    print(k, round(trace[k - 1][1], 4))

# exact at small n
print(gw.decay_trace(lazy, 3))
