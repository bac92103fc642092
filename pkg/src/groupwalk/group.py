"""Finite groups given by Cayley tables, and the subgroup machinery on top of them.

Elements are integer indices ``0..n-1``.  Products read left to right:
``cayley[a, b]`` is the index of ``a*b``, and for permutation groups ``a*b``
means "apply ``a``, then ``b``".  Every set-valued result is sorted by index so
reports and golden tests are reproducible.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidGroup,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotLatinSquare,
    OrderCapExceeded,
    SeedOutsideAmbient,
    UnknownPreset,
)

__all__ = [
    "DEFAULT_ORDER_CAP",
    "DEFAULT_LATTICE_CAP",
    "FiniteGroup",
    "Subgroup",
    "Coset",
    "build_from_cayley",
    "build_from_permutations",
    "cyclic",
    "dihedral",
    "symmetric",
    "quaternion8",
    "direct_product",
    "preset",
    "parse_preset",
    "subgroup_generated",
    "normal_closure",
    "normalizer",
    "enumerate_subgroups",
    "left_cosets",
    "cosets",
    "parse_cycles",
    "format_cycles",
    "parse_cayley_text",
    "read_cayley_file",
]

DEFAULT_ORDER_CAP = 10000
DEFAULT_LATTICE_CAP = 48

# full O(n^3) associativity scans are used up to this order when a generating
# set is known; beyond it Light's test over the generators is used instead
_FULL_SCAN_ORDER = 64


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated finite group.

    Build instances with :func:`build_from_cayley`, :func:`build_from_permutations`
    or one of the presets rather than calling the constructor directly.
    """

    cayley: np.ndarray
    identity: int
    inverse: np.ndarray
    labels: tuple[str, ...]
    generators: tuple[int, ...] = ()
    _key: int = field(default=0, repr=False)

    def __post_init__(self):
        self.cayley.setflags(write=False)
        self.inverse.setflags(write=False)
        object.__setattr__(self, "_key", hash((self.order, self.cayley.tobytes())))

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        """``a**k`` for any integer ``k`` (negative powers use the inverse)."""
        if k < 0:
            a, k = self.inv(a), -k
        result, base = self.identity, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def conjugate(self, a: int, g: int) -> int:
        """``g^-1 * a * g``."""
        return self.mul(self.mul(self.inv(g), a), g)

    def index_of(self, label) -> int:
        """Resolve an element given as an index or a display label."""
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            if 0 <= label < self.order:
                return int(label)
            raise KeyError(f"element index {label} out of range for order {self.order}")
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"no element labelled {label!r}") from None

    def whole(self) -> Subgroup:
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self) -> Subgroup:
        return Subgroup(self, (self.identity,))

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or (
            self._key == other._key and np.array_equal(self.cayley, other.cayley)
        )

    def __hash__(self):
        return self._key

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        # Lagrange, as a cheap sanity check on every construction
        assert self.parent.order % len(self.members) == 0, "subgroup order must divide group order"

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    @property
    def sort_key(self):
        return (len(self.members), self.members)

    def __contains__(self, a) -> bool:
        return int(a) in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_cached_set", s)
        return s

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def issubset(self, other: Subgroup) -> bool:
        return self._set <= other._set

    def is_normal_in(self, ambient: Subgroup | None = None) -> bool:
        """Exhaustive conjugation check against every element of ``ambient``."""
        G = self.parent
        amb = np.arange(G.order) if ambient is None else np.asarray(ambient.members)
        H = np.asarray(self.members)
        conj = G.cayley[G.cayley[G.inverse[amb]][:, H], amb[:, None]]
        return bool(self.mask[conj].all())

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.members == other.members and self.parent == other.parent

    def __hash__(self):
        return hash((self.parent, self.members))

    def __repr__(self):
        return f"Subgroup(order={self.order}, members={list(self.members)})"


@dataclass(frozen=True)
class Coset:
    subgroup: Subgroup
    representative: int
    side: str = "left"

    @property
    def members(self) -> tuple[int, ...]:
        C = self.subgroup.parent.cayley
        H = list(self.subgroup.members)
        if self.side == "left":
            cells = C[self.representative, H]
        else:
            cells = C[H, self.representative]
        return tuple(sorted(int(x) for x in cells))

    def __contains__(self, a) -> bool:
        return int(a) in self.members


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _check_latin(C: np.ndarray) -> None:
    n = C.shape[0]
    target = np.arange(n)
    bad_rows = np.nonzero((np.sort(C, axis=1) != target).any(axis=1))[0]
    if bad_rows.size:
        a = int(bad_rows[0])
        raise NotLatinSquare(f"row {a} is not a permutation of 0..{n - 1}")
    bad_cols = np.nonzero((np.sort(C, axis=0) != target[:, None]).any(axis=0))[0]
    if bad_cols.size:
        b = int(bad_cols[0])
        raise NotLatinSquare(f"column {b} is not a permutation of 0..{n - 1}")


def _check_associative(C: np.ndarray, middles: Iterable[int] | None = None) -> None:
    """Compare ``(a*b)*c`` with ``a*(b*c)``.

    With ``middles=None`` every triple is scanned.  Otherwise only triples whose
    middle factor is one of ``middles`` are checked (Light's test), which is
    exhaustive-equivalent when ``middles`` generates the table.
    """
    n = C.shape[0]
    if middles is None:
        for a in range(n):
            left = C[C[a]]          # [b, c] -> (a*b)*c
            right = C[a][C]         # [b, c] -> a*(b*c)
            bad = np.argwhere(left != right)
            if bad.size:
                b, c = (int(v) for v in bad[0])
                raise NotAssociative(f"(a*b)*c != a*(b*c) for a={a}, b={b}, c={c}")
        return
    rows = np.arange(n)[:, None]
    for g in middles:
        left = C[C[:, g]]           # [x, y] -> (x*g)*y
        right = C[rows, C[g][None, :]]  # [x, y] -> x*(g*y)
        bad = np.argwhere(left != right)
        if bad.size:
            x, y = (int(v) for v in bad[0])
            raise NotAssociative(f"(a*b)*c != a*(b*c) for a={x}, b={g}, c={y}")


def _find_identity(C: np.ndarray) -> int:
    n = C.shape[0]
    target = np.arange(n)
    for e in range(n):
        if np.array_equal(C[e], target) and np.array_equal(C[:, e], target):
            return e
    raise NoIdentity("no element acts as a two-sided identity")


def _find_inverse(C: np.ndarray, e: int) -> np.ndarray:
    n = C.shape[0]
    hits = C == e
    has = hits.any(axis=1)
    if not has.all():
        a = int(np.nonzero(~has)[0][0])
        raise NoInverse(f"element {a} has no right inverse")
    inv = hits.argmax(axis=1)
    back = C[inv, np.arange(n)]
    if (back != e).any():
        a = int(np.nonzero(back != e)[0][0])
        raise NoInverse(f"right inverse {int(inv[a])} of element {a} is not a left inverse")
    return inv


def _make_group(table, labels=None, generators=None, check_associativity=True) -> FiniteGroup:
    C = np.array(table, dtype=np.int64)
    if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] == 0:
        raise InvalidGroup(f"Cayley table must be a non-empty square table, got shape {C.shape}")
    n = C.shape[0]
    if C.min() < 0 or C.max() >= n:
        raise InvalidGroup(f"Cayley table entries must lie in 0..{n - 1}")
    C = C.astype(np.int32)
    _check_latin(C)
    if check_associativity:
        if generators and n > _FULL_SCAN_ORDER:
            _check_associative(C, generators)
        else:
            _check_associative(C)
    e = _find_identity(C)
    inv = _find_inverse(C, e)
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    else:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise InvalidGroup(f"expected {n} labels, got {len(labels)}")
        if len(set(labels)) != n:
            raise InvalidGroup("element labels must be distinct")
    return FiniteGroup(C, e, inv.astype(np.int32), labels, tuple(generators or ()))


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def build_from_cayley(table, labels: Sequence[str] | None = None) -> FiniteGroup:
    """Validate a Cayley table and wrap it as a :class:`FiniteGroup`.

    The table is checked for the Latin property, then by a full triple scan for
    associativity, then for identity and inverses.  Each failure raises the
    matching :class:`~groupwalk.errors.InvalidGroup` subclass naming the
    offending indices.
    """
    return _make_group(table, labels)


def build_from_permutations(generators: Sequence, degree: int | None = None,
                            order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Close a set of permutations under composition.

    Generators are image lists (``g[i]`` is the image of ``i``) or strings in
    cycle notation.  Elements are numbered in BFS order from the identity,
    extending each element by the generators in the order given.  Labels are
    the cycle notation of each element.
    """
    perms = []
    for g in generators:
        if isinstance(g, str):
            perms.append(parse_cycles(g, degree))
        else:
            perms.append(tuple(int(x) for x in g))
    if degree is None:
        degree = max((len(p) for p in perms), default=0)
    fixed = []
    for p in perms:
        if sorted(p) != list(range(len(p))):
            raise InvalidGroup(f"{p} is not a permutation of 0..{len(p) - 1}")
        if len(p) > degree:
            raise InvalidGroup(f"generator {p} exceeds degree {degree}")
        fixed.append(tuple(p) + tuple(range(len(p), degree)))
    perms = fixed

    ident = tuple(range(degree))
    index = {ident: 0}
    elems = [ident]
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in perms:
            y = tuple(g[k] for k in x)
            if y not in index:
                if len(elems) >= order_cap:
                    raise OrderCapExceeded(f"closure exceeds order cap {order_cap}")
                index[y] = len(elems)
                elems.append(y)
        i += 1

    n = len(elems)
    P = np.array(elems, dtype=np.int64).reshape(n, degree)
    table = np.empty((n, n), dtype=np.int64)
    if degree == 0:
        table[:] = 0
    elif degree <= 15:
        weights = degree ** np.arange(degree, dtype=np.int64)
        codes = P @ weights
        order = np.argsort(codes)
        sorted_codes = codes[order]
        for a in range(n):
            prod = P[:, P[a]]  # row b: (a*b)[k] = b[a[k]]
            table[a] = order[np.searchsorted(sorted_codes, prod @ weights)]
    else:
        for a in range(n):
            prod = P[:, P[a]]
            table[a] = [index[tuple(row)] for row in prod.tolist()]
    labels = [format_cycles(p) for p in elems]
    gens = sorted({index[p] for p in perms})
    return _make_group(table, labels, generators=gens)


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

def _cap(order: int, order_cap: int) -> None:
    if order > order_cap:
        raise OrderCapExceeded(f"order {order} exceeds order cap {order_cap}")


def cyclic(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Cyclic group of order ``n``; element ``k`` is ``k`` and ``a*b = (a+b) mod n``."""
    if n < 1:
        raise UnknownPreset(f"cyclic({n}): order must be positive")
    _cap(n, order_cap)
    k = np.arange(n)
    return _make_group((k[:, None] + k[None, :]) % n, generators=[1 % n])


def dihedral(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Dihedral group of order ``2n``.

    Index ``j*n + k`` is ``r^k s^j`` with ``r`` a rotation of order ``n`` and
    ``s`` a reflection, so ``s r s = r^-1``.
    """
    if n < 1:
        raise UnknownPreset(f"dihedral({n}): n must be positive")
    _cap(2 * n, order_cap)
    idx = np.arange(2 * n)
    j, k = divmod(idx, n)
    sign = np.where(j == 1, -1, 1)
    rot = (k[:, None] + sign[:, None] * k[None, :]) % n
    ref = (j[:, None] + j[None, :]) % 2
    table = ref * n + rot
    labels = [f"r^{kk}" + (" s" if jj else "") for jj, kk in zip(j, k)]
    return _make_group(table, labels, generators=sorted({1 % n, n}))


def symmetric(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Symmetric group on ``n`` points, generated by ``(0 1)`` and ``(0 1 ... n-1)``."""
    if n < 1:
        raise UnknownPreset(f"symmetric({n}): n must be positive")
    _cap(math.factorial(n), order_cap)
    if n == 1:
        return build_from_permutations([], degree=1)
    transposition = [1, 0] + list(range(2, n))
    cycle = list(range(1, n)) + [0]
    return build_from_permutations([transposition, cycle], degree=n, order_cap=order_cap)


_QUAT_UNITS = ("1", "i", "j", "k")
# unit products: (u, v) -> (sign, unit) for 1, i, j, k
_QUAT_MUL = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion8() -> FiniteGroup:
    """Quaternion group; indices 0..7 are ``1, i, j, k, -1, -i, -j, -k``."""
    table = np.empty((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            sa, ua = divmod(a, 4)
            sb, ub = divmod(b, 4)
            s, u = _QUAT_MUL[ua, ub]
            neg = (sa + sb + (s < 0)) % 2
            table[a, b] = 4 * neg + u
    labels = list(_QUAT_UNITS) + ["-" + u for u in _QUAT_UNITS]
    return _make_group(table, labels, generators=[1, 2])


def direct_product(a: FiniteGroup, b: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Direct product; the pair ``(x, y)`` has index ``x*|b| + y``."""
    _cap(a.order * b.order, order_cap)
    m = b.order
    table = (a.cayley[:, None, :, None] * m + b.cayley[None, :, None, :]).reshape(
        a.order * m, a.order * m)
    labels = [f"({x},{y})" for x in a.labels for y in b.labels]
    gens = [g * m + b.identity for g in a.generators] + [a.identity * m + h for h in b.generators]
    return _make_group(table, labels, generators=sorted(set(gens)))


_PRESETS = {
    "cyclic": (cyclic, 1),
    "dihedral": (dihedral, 1),
    "symmetric": (symmetric, 1),
    "quaternion8": (quaternion8, 0),
    "direct_product": (direct_product, 2),
}


def preset(name: str, *args, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build a named group: ``preset("cyclic", 4)``, ``preset("direct_product", G, H)``."""
    try:
        fn, arity = _PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; expected one of {sorted(_PRESETS)}") from None
    if len(args) != arity:
        raise UnknownPreset(f"preset {name!r} takes {arity} argument(s), got {len(args)}")
    if name == "quaternion8":
        return fn()
    if name == "direct_product":
        args = tuple(parse_preset(x, order_cap) if isinstance(x, str) else x for x in args)
    else:
        args = (int(args[0]),)
    return fn(*args, order_cap=order_cap)


def _split_args(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
            continue
        depth += (ch == "(") - (ch == ")")
        cur.append(ch)
    tail = "".join(cur).strip()
    if tail or parts:
        parts.append(tail)
    return parts


def parse_preset(text: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Parse preset expressions such as ``"dihedral(4)"`` or
    ``"direct_product(cyclic(2), symmetric(3))"``."""
    m = re.fullmatch(r"\s*([a-z_0-9]+)\s*(?:\((.*)\))?\s*", text)
    if not m:
        raise UnknownPreset(f"cannot parse preset {text!r}")
    name, body = m.group(1), m.group(2)
    args = _split_args(body) if body is not None else []
    if name == "direct_product":
        return preset(name, *args, order_cap=order_cap)
    try:
        args = [int(x) for x in args]
    except ValueError:
        raise UnknownPreset(f"non-integer argument in preset {text!r}") from None
    return preset(name, *args, order_cap=order_cap)


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------

def _closure_mask(G: FiniteGroup, start: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Right-multiplicative closure of the set ``start`` by ``gens``.

    In a finite group this is the subgroup generated by ``start`` and ``gens``
    whenever ``start`` contains the identity and generates together with gens.
    """
    mask = np.zeros(G.order, dtype=bool)
    mask[start] = True
    frontier = np.unique(start)
    if gens.size == 0:
        return mask
    while frontier.size:
        new = G.cayley[np.ix_(frontier, gens)].ravel()
        new = np.unique(new[~mask[new]])
        mask[new] = True
        frontier = new
    return mask


def _from_mask(G: FiniteGroup, mask: np.ndarray) -> Subgroup:
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(mask)))


def _as_indices(G: FiniteGroup, seed) -> np.ndarray:
    idx = np.array(sorted({int(x) for x in seed}), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= G.order):
        raise ValueError(f"seed elements must lie in 0..{G.order - 1}")
    return idx


def subgroup_generated(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seed``; an empty seed gives the trivial subgroup."""
    gens = _as_indices(G, seed)
    return _from_mask(G, _closure_mask(G, np.array([G.identity]), gens))


def normal_closure(G: FiniteGroup, ambient: Subgroup, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seed`` and closed under conjugation by ``ambient``.

    Computed as the subgroup generated by every ``g^-1 s g`` (``g`` in ambient,
    ``s`` in seed); that set is conjugation-stable, so its closure is the fixpoint.
    """
    S = _as_indices(G, seed)
    if not all(int(s) in ambient for s in S):
        outside = [int(s) for s in S if int(s) not in ambient]
        raise SeedOutsideAmbient(f"seed elements {outside} are not in the ambient subgroup")
    if S.size == 0:
        return G.trivial()
    A = np.asarray(ambient.members)
    conj = G.cayley[G.cayley[G.inverse[A]][:, S], A[:, None]]
    return _from_mask(G, _closure_mask(G, np.array([G.identity]), np.unique(conj)))


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    """``{g in G : g H g^-1 = H}``."""
    g = np.arange(G.order)
    Hm = np.asarray(H.members)
    conj = G.cayley[G.cayley[g[:, None], Hm[None, :]], G.inverse[g][:, None]]
    # conjugation is injective, so containment already means equality
    return _from_mask(G, H.mask[conj].all(axis=1))


def enumerate_subgroups(G: FiniteGroup, within: Subgroup | None = None,
                        cap: int = DEFAULT_LATTICE_CAP) -> list[Subgroup]:
    """All subgroups of ``G`` (or of ``within``), sorted by ``(size, members)``.

    Naive lattice BFS: start from the trivial subgroup and extend every known
    subgroup by every element outside it, closing each time, until nothing new
    appears.  This is the slow oracle, capped at ``cap`` elements.
    """
    base = np.arange(G.order) if within is None else np.asarray(within.members)
    if base.size > cap:
        raise OrderCapExceeded(f"lattice enumeration capped at order {cap}, got {base.size}")
    start = np.zeros(G.order, dtype=bool)
    start[G.identity] = True
    seen = {start.tobytes(): start}
    queue = deque([start])
    while queue:
        mask = queue.popleft()
        members = np.flatnonzero(mask)
        for x in base:
            if mask[x]:
                continue
            new = _closure_mask(G, members, np.append(members, x))
            key = new.tobytes()
            if key not in seen:
                seen[key] = new
                queue.append(new)
    subs = [_from_mask(G, m) for m in seen.values()]
    return sorted(subs, key=lambda s: s.sort_key)


def cosets(G: FiniteGroup, H: Subgroup, side: str = "left") -> list[Coset]:
    """Partition ``G`` into cosets of ``H``; the first cell is ``H`` itself and
    each representative is the least index of its cell."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    covered = np.zeros(G.order, dtype=bool)
    Hm = np.asarray(H.members)
    out = []
    for g in [G.identity] + list(range(G.order)):
        if covered[g]:
            continue
        cells = G.cayley[g, Hm] if side == "left" else G.cayley[Hm, g]
        covered[cells] = True
        rep = int(cells.min()) if g != G.identity else G.identity
        out.append(Coset(H, rep, side))
    return out


def left_cosets(G: FiniteGroup, H: Subgroup) -> list[Coset]:
    return cosets(G, H, "left")


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> tuple[int, ...]:
    """Parse one-line cycle notation such as ``"(0 1)(2 3)"`` into an image tuple.

    Cycles are applied left to right when they overlap.  ``"()"`` or ``""`` is
    the identity.
    """
    text = text.strip()
    if _CYCLE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation {text!r}")
    cycles = []
    for body in _CYCLE.findall(text):
        pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated point in cycle ({body})")
        if any(p < 0 for p in pts):
            raise ValueError(f"negative point in cycle ({body})")
        cycles.append(pts)
    top = max((max(c) + 1 for c in cycles if c), default=0)
    if degree is None:
        degree = top
    elif top > degree:
        raise ValueError(f"cycle notation {text!r} moves points beyond degree {degree}")
    perm = list(range(degree))
    for cyc in cycles:
        step = list(range(degree))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            step[a] = b
        perm = [step[x] for x in perm]
    return tuple(perm)


def format_cycles(perm: Sequence[int]) -> str:
    seen, parts = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = perm[x]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def parse_cayley_text(text: str) -> FiniteGroup:
    """Parse the plain-text table format.

    First line ``n``, then ``n`` rows of ``n`` whitespace-separated indices,
    then an optional line of ``n`` labels.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InvalidGroup("empty Cayley table file")
    try:
        n = int(lines[0])
    except ValueError:
        raise InvalidGroup(f"line 1: expected the group order, got {lines[0]!r}") from None
    if len(lines) < n + 1:
        raise InvalidGroup(f"expected {n} table rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:n + 1], start=2):
        try:
            row = [int(t) for t in ln.split()]
        except ValueError:
            raise InvalidGroup(f"table row {i - 1}: non-integer entry in {ln!r}") from None
        if len(row) != n:
            raise InvalidGroup(f"table row {i - 1}: expected {n} entries, got {len(row)}")
        rows.append(row)
    labels = None
    rest = lines[n + 1:]
    if rest:
        if len(rest) > 1:
            raise InvalidGroup("trailing content after the label line")
        labels = rest[0].split()
    return build_from_cayley(rows, labels)


def read_cayley_file(path) -> FiniteGroup:
    return parse_cayley_text(Path(path).read_text())
