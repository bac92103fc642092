"""Probability distributions on a finite group.

Two numeric backends share one code path: ``float64`` arrays (default) and
object arrays of :class:`fractions.Fraction` (``exact=True``).  Convolution
follows the package's left-to-right product convention: ``convolve(p, q)`` is
the law of ``x*y`` for independent ``x ~ p`` and ``y ~ q``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import GroupMismatch, InvalidDistribution
from .group import FiniteGroup, Subgroup, subgroup_generated

__all__ = [
    "Distribution",
    "parse_probability",
    "uniform_on",
    "point_mass",
    "convolve",
    "convolution_power",
    "support_subgroup",
    "tv_distance",
    "decay_trace",
]

SUM_TOL = 1e-12
_DENSE_TRACE_ORDER = 2048


def parse_probability(value, exact: bool = False):
    """Accept a number, a decimal string or an ``"a/b"`` fraction string."""
    if isinstance(value, bool):
        raise InvalidDistribution(f"probability must be numeric, got {value!r}")
    if isinstance(value, str):
        try:
            frac = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidDistribution(f"cannot parse probability {value!r}") from None
        return frac if exact else float(frac)
    if isinstance(value, Rational):
        return Fraction(value) if exact else float(value)
    if isinstance(value, (float, np.floating)):
        # repr keeps the decimal the user wrote, not its binary expansion
        return Fraction(repr(float(value))) if exact else float(value)
    raise InvalidDistribution(f"probability must be numeric, got {value!r}")


class Distribution:
    """A probability vector over the elements of a :class:`FiniteGroup`."""

    __slots__ = ("group", "probs")

    def __init__(self, group: FiniteGroup, probs, exact: bool | None = None, validate: bool = True):
        if exact is None:
            exact = isinstance(probs, np.ndarray) and probs.dtype == object
        if exact:
            arr = np.empty(len(probs), dtype=object)
            arr[:] = [parse_probability(x, exact=True) for x in probs]
        else:
            arr = np.asarray(probs, dtype=np.float64).copy()
        if arr.ndim != 1 or arr.shape[0] != group.order:
            raise InvalidDistribution(
                f"probability vector has length {arr.shape[0] if arr.ndim else 0}, group order is {group.order}")
        if validate:
            neg = [i for i, x in enumerate(arr) if x < 0]
            if neg:
                raise InvalidDistribution(f"negative probability at element {neg[0]}")
            total = arr.sum()
            if exact and total != 1:
                raise InvalidDistribution(f"probabilities sum to {total}, not exactly 1")
            if not exact and not abs(total - 1.0) <= SUM_TOL:
                raise InvalidDistribution(f"probabilities sum to {total!r}, not 1")
        arr.setflags(write=False)
        self.group = group
        self.probs = arr

    @classmethod
    def _raw(cls, group, arr):
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj.group = group
        obj.probs = arr
        return obj

    @classmethod
    def from_pairs(cls, group: FiniteGroup, pairs, exact: bool = False) -> Distribution:
        """Build from ``(element label or index, probability)`` pairs; unlisted elements get 0."""
        zero = Fraction(0) if exact else 0.0
        probs = [zero] * group.order
        seen = set()
        for pos, (elem, prob) in enumerate(pairs):
            try:
                a = group.index_of(elem)
            except KeyError as exc:
                raise InvalidDistribution(f"pair {pos}: {exc.args[0]}") from None
            if a in seen:
                raise InvalidDistribution(f"pair {pos}: element {elem!r} listed twice")
            seen.add(a)
            probs[a] = parse_probability(prob, exact)
        return cls(group, np.array(probs, dtype=object) if exact else probs, exact=exact)

    @property
    def exact(self) -> bool:
        return self.probs.dtype == object

    @property
    def order(self) -> int:
        return self.group.order

    def support(self, atom_threshold=0) -> tuple[int, ...]:
        """Indices with mass strictly above ``atom_threshold``."""
        return tuple(i for i, x in enumerate(self.probs) if x > atom_threshold)

    def as_float(self) -> Distribution:
        return Distribution._raw(self.group, np.array([float(x) for x in self.probs]))

    def as_exact(self) -> Distribution:
        if self.exact:
            return self
        arr = np.empty(self.order, dtype=object)
        arr[:] = [Fraction(float(x)) for x in self.probs]
        return Distribution._raw(self.group, arr)

    def __getitem__(self, a):
        return self.probs[a]

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.group == other.group and bool(np.all(self.probs == other.probs))

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"Distribution({kind}, {list(self.probs)})"


def _zeros(n: int, exact: bool) -> np.ndarray:
    if exact:
        arr = np.empty(n, dtype=object)
        arr[:] = [Fraction(0)] * n
        return arr
    return np.zeros(n)


def point_mass(group: FiniteGroup, a: int, exact: bool = False) -> Distribution:
    arr = _zeros(group.order, exact)
    arr[a] = Fraction(1) if exact else 1.0
    return Distribution._raw(group, arr)


def uniform_on(H: Subgroup, exact: bool = False) -> Distribution:
    """Mass ``1/|H|`` on each member of ``H``: the Haar law of ``H`` seen inside its parent."""
    arr = _zeros(H.parent.order, exact)
    mass = Fraction(1, H.order) if exact else 1.0 / H.order
    for h in H.members:
        arr[h] = mass
    return Distribution._raw(H.parent, arr)


def _check_same(p: Distribution, q: Distribution) -> None:
    if p.group != q.group:
        raise GroupMismatch("distributions live on different groups")


def _convolve_arrays(C: np.ndarray, p: np.ndarray, q: np.ndarray, exact: bool) -> np.ndarray:
    if not exact:
        nz = np.flatnonzero(p)
        return np.bincount(C[nz].ravel(), weights=np.outer(p[nz], q).ravel(), minlength=len(p))
    out = _zeros(len(p), exact)
    for a in np.flatnonzero(p != 0):
        # row a of the table is a permutation, so fancy-index += is safe
        out[C[a]] += p[a] * q
    return out


def _promote(p: Distribution, q: Distribution):
    if p.exact == q.exact:
        return p, q, p.exact
    return p.as_float(), q.as_float(), False


def convolve(p: Distribution, q: Distribution) -> Distribution:
    """``(p*q)(g) = sum_a p(a) q(a^-1 g)``."""
    _check_same(p, q)
    p, q, exact = _promote(p, q)
    return Distribution._raw(p.group, _convolve_arrays(p.group.cayley, p.probs, q.probs, exact))


def convolution_power(p: Distribution, n: int) -> Distribution:
    """``p`` convolved with itself ``n`` times, by binary exponentiation."""
    if n < 1:
        raise ValueError("convolution power requires n >= 1")
    result, base = None, p
    while n:
        if n & 1:
            result = base if result is None else convolve(result, base)
        n >>= 1
        if n:
            base = convolve(base, base)
    return result


def support_subgroup(p: Distribution, atom_threshold=0) -> Subgroup:
    """Subgroup generated by the elements carrying mass above ``atom_threshold``."""
    return subgroup_generated(p.group, p.support(atom_threshold))


def tv_distance(p: Distribution, q: Distribution):
    """Total variation distance ``(1/2) sum_g |p(g) - q(g)|``.

    Returns a :class:`~fractions.Fraction` when both inputs are exact.
    """
    _check_same(p, q)
    p, q, exact = _promote(p, q)
    d = sum(abs(x - y) for x, y in zip(p.probs, q.probs)) if exact else np.abs(p.probs - q.probs).sum()
    return d / 2 if exact else float(d) / 2


def decay_trace(p: Distribution, n_max: int, atom_threshold=0, stop_below=None) -> list[tuple[int, object]]:
    """``[(n, tv(p^{*n}, uniform on the support subgroup)) for n = 1..n_max]``.

    The walk is tracked through its deviation ``p^{*n} - u``, which obeys the
    same recursion as ``p^{*n}`` because ``u`` absorbs ``p``.  In the float
    backend this keeps full relative precision far below ``1e-16``; the mean of
    the deviation (exactly zero) is re-projected out after every step.  With
    ``stop_below`` set, the trace ends at the first distance below that value.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    H = support_subgroup(p, atom_threshold)
    u = uniform_on(H, exact=p.exact)
    members = np.asarray(H.members)
    C = p.group.cayley
    dev = p.probs - u.probs
    step = None
    if (not p.exact and members.size <= _DENSE_TRACE_ORDER
            and not np.delete(p.probs, members).any()):
        # the deviation lives on the support subgroup; step it with the dense block
        # T[x, y] = p(x^-1 y) restricted there
        pos = np.full(p.order, -1)
        pos[members] = np.arange(members.size)
        sub = C[np.ix_(members, members)]
        step = np.zeros((members.size, members.size))
        step[np.arange(members.size)[:, None], pos[sub]] = p.probs[members][None, :]
        dev = dev[members]
    trace = []
    for n in range(1, n_max + 1):
        if p.exact:
            d = sum(abs(x) for x in dev) / 2
        else:
            d = float(np.abs(dev).sum()) / 2
        trace.append((n, d))
        if stop_below is not None and d < stop_below:
            break
        if n == n_max:
            break
        if step is not None:
            dev = dev @ step
            dev -= dev.sum() / members.size
            continue
        dev = _convolve_arrays(C, dev, p.probs, p.exact)
        if not p.exact:
            dev[members] -= dev[members].sum() / members.size
    return trace
