"""Does a random walk on a finite group settle down?

Either the n-step law tends to the uniform law on the subgroup the steps
generate, or the walk is trapped cycling through the cosets of a normal
subgroup.  Three small walks, one of each kind and one borderline.
"""
import groupwalk as gw

# +1 or +2 on Z/3, fair coin.  Mixes, distance halves every step.
Z3 = gw.cyclic(3)
p = gw.Distribution.from_pairs(Z3, [(1, "1/2"), (2, "1/2")], exact=True)
print(type(gw.verdict(p)).__name__)
for n, d in gw.decay_trace(p, 6):
    print(n, d)

# rotate or reflect the square.  Every step flips the "rotation parity",
# so even and odd times live in different halves of the group.
D4 = gw.dihedral(4)
q = gw.Distribution.from_pairs(D4, [("r^1", 0.5), ("r^0 s", 0.5)])
obs = gw.detect_obstruction(q)
print("H* =", [D4.labels[i] for i in obs.subgroup], "period", obs.period)
print("coset holding the steps:", [D4.labels[i] for i in obs.coset()])

# the brute-force search over all subgroups finds the same witness
print(obs.same_as(gw.brute_force_obstruction(q)))

# a lazy step breaks the cycle
lazy = gw.Distribution.from_pairs(D4, [("r^0", 0.2), ("r^1", 0.4), ("r^0 s", 0.4)])
print(type(gw.verdict(lazy)).__name__)

# only the support matters, not the masses
q2 = gw.Distribution.from_pairs(D4, [("r^1", 0.99), ("r^0 s", 0.01)])
print(gw.detect_obstruction(q2).same_as(obs))
