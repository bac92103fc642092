"""Random walks on compact matrix groups.

A :class:`MatrixMeasure` is either a finite list of unitary atoms, a rotation
about a fixed axis in 3D (fixed angle or uniform angle), or the product law of
independent factors.  The walk is studied through moment operators
``E[phi(x)]`` for the defining representation ``phi`` and its tensor powers:
their powers are the moments of the walk, so non-convergence of ``T^n`` means
the walk itself does not converge.  Only finite orbits get an exact answer,
through :func:`classify_finite_orbit` and the finite-group pipeline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    InvalidDistribution,
    NoClosedForm,
    SamplerUnavailable,
    TooLarge,
    ToleranceCollision,
)
from .group import FiniteGroup, _make_group
from .measure import Distribution, parse_probability

__all__ = [
    "MAX_DIMENSION",
    "MatrixMeasure",
    "MomentOperator",
    "FiniteOrbit",
    "MomentCheck",
    "rotation",
    "rotation_2d",
    "kron_power",
    "moment_operator",
    "moment_power_norm",
    "moment_increment_norm",
    "moment_check",
    "estimate_moment",
    "classify_finite_orbit",
]

MAX_DIMENSION = 8
SHARD_SIZE = 4096


def rotation(axis, theta):
    """Rotation matrix (or stack, for array ``theta``) about ``axis`` by ``theta``."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    K = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta)[..., None, None]
    s = np.sin(theta)[..., None, None]
    return c * np.eye(3) + s * K + (1 - c) * np.outer(a, a)


def rotation_2d(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def kron_power(A: np.ndarray, k: int) -> np.ndarray:
    """``A (x) A (x) ... (x) A`` (``k`` factors); works on stacks ``(..., d, d)``."""
    out = A
    for _ in range(k - 1):
        lead = out.shape[:-2]
        p, q = out.shape[-2:], A.shape[-2:]
        out = np.einsum("...ij,...kl->...ikjl", out, A).reshape(*lead, p[0] * q[0], p[1] * q[1])
    return out


@dataclass(frozen=True, eq=False)
class MatrixMeasure:
    kind: str
    dimension: int
    atoms: tuple = ()
    probs: tuple = ()
    axis: tuple | None = None
    angle: float | None = None
    factors: tuple = ()
    tolerance: float = 1e-9
    sampler: Callable | None = field(default=None, repr=False)
    mean_fn: Callable | None = field(default=None, repr=False)

    # -- constructors -----------------------------------------------------

    @classmethod
    def finite(cls, atoms, probs, tolerance: float = 1e-9) -> MatrixMeasure:
        mats = [np.array(M, dtype=complex) for M in atoms]
        if not mats:
            raise InvalidDistribution("finite_atoms needs at least one atom")
        d = mats[0].shape[0]
        _check_dimension(d)
        probs = [float(p) for p in probs]
        if len(probs) != len(mats):
            raise InvalidDistribution(f"{len(mats)} atoms but {len(probs)} probabilities")
        if any(p < 0 for p in probs):
            raise InvalidDistribution("negative atom probability")
        if abs(sum(probs) - 1) > 1e-12:
            raise InvalidDistribution(f"atom probabilities sum to {sum(probs)!r}, not 1")
        eye = np.eye(d)
        for i, M in enumerate(mats):
            if M.shape != (d, d):
                raise InvalidDistribution(f"atom {i} has shape {M.shape}, expected {(d, d)}")
            err = np.linalg.norm(M.conj().T @ M - eye)
            if err > tolerance:
                raise InvalidDistribution(f"atom {i} is not unitary: |M*M - I| = {err:.3g}")
            M.setflags(write=False)
        return cls("finite_atoms", d, atoms=tuple(mats), probs=tuple(probs), tolerance=tolerance)

    @classmethod
    def axis_rotation(cls, axis, angle: float | None = None) -> MatrixMeasure:
        """Rotation about ``axis`` by ``angle``; ``angle=None`` draws it uniformly from [0, 2pi)."""
        a = np.asarray(axis, dtype=float)
        if a.shape != (3,) or not np.linalg.norm(a) > 0:
            raise InvalidDistribution("axis must be a non-zero 3-vector")
        return cls("axis_rotation", 3, axis=tuple(a / np.linalg.norm(a)),
                   angle=None if angle is None else float(angle))

    @classmethod
    def product(cls, *factors: MatrixMeasure) -> MatrixMeasure:
        """Law of ``x1 * x2 * ...`` with independent ``xi`` drawn from each factor."""
        if not factors:
            raise InvalidDistribution("product needs at least one factor")
        d = factors[0].dimension
        if any(f.dimension != d for f in factors):
            raise InvalidDistribution("product factors have different dimensions")
        return cls("product", d, factors=tuple(factors))

    @classmethod
    def custom(cls, dimension: int, sampler=None, mean=None) -> MatrixMeasure:
        """User-supplied law: ``sampler(rng, size)`` returns a ``(size, d, d)`` stack."""
        _check_dimension(dimension)
        return cls("custom", dimension, sampler=sampler, mean_fn=mean)

    # -- behaviour --------------------------------------------------------

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "finite_atoms":
            idx = rng.choice(len(self.atoms), size=size, p=np.asarray(self.probs))
            return np.stack(self.atoms)[idx]
        if self.kind == "axis_rotation":
            if self.angle is None:
                theta = rng.uniform(0.0, 2 * math.pi, size=size)
            else:
                theta = np.full(size, self.angle)
            return rotation(self.axis, theta).astype(complex)
        if self.kind == "product":
            out = self.factors[0].sample(rng, size)
            for f in self.factors[1:]:
                out = out @ f.sample(rng, size)
            return out
        if self.sampler is None:
            raise SamplerUnavailable("this measure has no sampler")
        return np.asarray(self.sampler(rng, size), dtype=complex)

    def mean(self, degree: int = 1) -> np.ndarray:
        """Closed-form ``E[phi(x)^(x)degree]``."""
        if self.kind == "finite_atoms":
            return sum(p * kron_power(M, degree) for M, p in zip(self.atoms, self.probs))
        if self.kind == "axis_rotation":
            if self.angle is not None:
                return kron_power(rotation(self.axis, self.angle).astype(complex), degree)
            if degree == 1:
                a = np.asarray(self.axis)
                return np.outer(a, a).astype(complex)
            # entries are trig polynomials of degree <= degree in the angle, so
            # the equally spaced rule with 2*degree+1 nodes is exact
            nodes = 2 * math.pi * np.arange(2 * degree + 1) / (2 * degree + 1)
            return kron_power(rotation(self.axis, nodes).astype(complex), degree).mean(axis=0)
        if self.kind == "product":
            out = self.factors[0].mean(degree)
            for f in self.factors[1:]:
                out = out @ f.mean(degree)
            return out
        if self.mean_fn is None:
            raise NoClosedForm("no closed-form mean; use estimate_moment")
        return np.asarray(self.mean_fn(degree), dtype=complex)

    # -- config round trip ------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind == "finite_atoms":
            return {
                "kind": "finite_atoms",
                "atoms": [{"matrix": [[[float(z.real), float(z.imag)] for z in row] for row in M],
                           "probability": p} for M, p in zip(self.atoms, self.probs)],
                "tolerance": self.tolerance,
            }
        if self.kind == "axis_rotation":
            angle = {"uniform": True} if self.angle is None else {"fixed": self.angle}
            return {"kind": "axis_rotation", "axis": list(self.axis), "angle": angle}
        if self.kind == "product":
            return {"kind": "product", "factors": [f.to_dict() for f in self.factors]}
        raise NoClosedForm("custom measures cannot be serialized")

    @classmethod
    def from_dict(cls, spec: dict, where: str = "matrix_measure") -> MatrixMeasure:
        """Parse the config layout; errors name the offending field path."""
        if not isinstance(spec, dict):
            raise InvalidDistribution(f"{where}: expected an object")
        kind = spec.get("kind")
        if kind == "finite_atoms":
            atoms, probs = [], []
            raw = spec.get("atoms")
            if not isinstance(raw, list) or not raw:
                raise InvalidDistribution(f"{where}.atoms: expected a non-empty list")
            for i, atom in enumerate(raw):
                try:
                    atoms.append(_parse_matrix(atom["matrix"]))
                    probs.append(parse_probability(atom["probability"]))
                except (KeyError, TypeError, ValueError) as exc:
                    raise InvalidDistribution(f"{where}.atoms[{i}]: {exc}") from None
            try:
                return cls.finite(atoms, probs, float(spec.get("tolerance", 1e-9)))
            except InvalidDistribution as exc:
                raise InvalidDistribution(f"{where}: {exc}") from None
        if kind == "axis_rotation":
            angle = spec.get("angle", {})
            if angle.get("uniform") is True:
                theta = None
            elif "fixed" in angle:
                theta = float(angle["fixed"])
            else:
                raise InvalidDistribution(f"{where}.angle: expected {{'fixed': x}} or {{'uniform': true}}")
            try:
                return cls.axis_rotation(spec.get("axis"), theta)
            except (InvalidDistribution, TypeError, ValueError) as exc:
                raise InvalidDistribution(f"{where}.axis: {exc}") from None
        if kind == "product":
            factors = spec.get("factors")
            if not isinstance(factors, list) or not factors:
                raise InvalidDistribution(f"{where}.factors: expected a non-empty list")
            return cls.product(*(cls.from_dict(f, f"{where}.factors[{i}]") for i, f in enumerate(factors)))
        raise InvalidDistribution(f"{where}.kind: unknown kind {kind!r}")


def _check_dimension(d: int) -> None:
    if not 1 <= d <= MAX_DIMENSION:
        raise InvalidDistribution(f"matrix dimension {d} outside 1..{MAX_DIMENSION}")


def _parse_matrix(rows) -> np.ndarray:
    out = []
    for row in rows:
        vals = []
        for z in row:
            if isinstance(z, (list, tuple)):
                if len(z) != 2:
                    raise ValueError("complex entries are [re, im] pairs")
                vals.append(complex(float(z[0]), float(z[1])))
            else:
                vals.append(complex(float(z)))
        out.append(vals)
    M = np.array(out, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    return M


def _matrix_json(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


@dataclass(frozen=True, eq=False)
class MomentOperator:
    """``E[phi(x_1 ... x_n)]`` for ``phi`` the ``degree``-th tensor power of the defining rep."""

    matrix: np.ndarray
    degree: int = 1
    walk_length: int = 1
    samples: int | None = None
    seed: int | None = None
    standard_error: np.ndarray | None = None

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def to_dict(self) -> dict:
        out = {
            "dimension": self.dimension,
            "degree": self.degree,
            "walk_length": self.walk_length,
            "estimate": _matrix_json(self.matrix),
        }
        if self.samples is not None:
            out["samples"] = self.samples
            out["seed"] = self.seed
            out["standard_error"] = [[float(x) for x in row] for row in self.standard_error]
        return out


def moment_operator(m: MatrixMeasure, degree: int = 1) -> MomentOperator:
    """Exact moment operator; raises :class:`NoClosedForm` when no mean is known."""
    return MomentOperator(np.asarray(m.mean(degree), dtype=complex), degree=degree)


def _mat(T) -> np.ndarray:
    return T.matrix if isinstance(T, MomentOperator) else np.asarray(T)


def moment_power_norm(T, n: int) -> float:
    """Spectral norm of ``T^n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(np.linalg.norm(np.linalg.matrix_power(_mat(T), n), 2))


def moment_increment_norm(T, n: int) -> float:
    """Spectral norm of ``T^n - T^(n+1)``; tends to 0 iff ``T^n`` converges."""
    A = _mat(T)
    P = np.linalg.matrix_power(A, n)
    return float(np.linalg.norm(P - P @ A, 2))


@dataclass(frozen=True)
class MomentCheck:
    """Per-degree convergence evidence from exact moment operators.

    ``converges`` is True when no tensor-power degree up to ``degree_max``
    shows a unit-circle eigenvalue other than 1.  That is a necessary
    condition only; divergence found at any degree is conclusive.
    """

    converges: bool
    degree_max: int
    blocking_degree: int | None
    unit_eigenvalues: dict
    increment_norms: dict

    @property
    def limitation(self) -> str:
        return f"necessary-condition check at degree <= {self.degree_max}"

    def to_dict(self) -> dict:
        return {
            "converges": self.converges,
            "degree_max": self.degree_max,
            "blocking_degree": self.blocking_degree,
            "unit_eigenvalues": {str(k): [[float(z.real), float(z.imag)] for z in v]
                                 for k, v in self.unit_eigenvalues.items()},
            "increment_norms": {str(k): v for k, v in self.increment_norms.items()},
            "limitation": self.limitation,
        }


def moment_check(m: MatrixMeasure, degree_max: int = 2, n: int = 200, tol: float = 1e-9) -> MomentCheck:
    """Look for unit-modulus eigenvalues other than 1 in ``E[phi^(x)k]``, ``k <= degree_max``.

    A convex combination of unitaries is a contraction, so ``T^n`` converges
    exactly when every eigenvalue on the unit circle equals 1.
    """
    units, incs, blocking = {}, {}, None
    for k in range(1, degree_max + 1):
        T = m.mean(k)
        lam = np.linalg.eigvals(T)
        on = lam[np.abs(lam) >= 1 - tol]
        units[k] = sorted(on.tolist(), key=lambda z: (round(math.atan2(z.imag, z.real), 12), z.real))
        incs[k] = moment_increment_norm(T, n)
        if blocking is None and (np.abs(on - 1) > math.sqrt(tol)).any():
            blocking = k
    return MomentCheck(blocking is None, degree_max, blocking, units, incs)


def estimate_moment(m: MatrixMeasure, n: int, samples: int, seed: int, degree: int = 1) -> MomentOperator:
    """Monte Carlo mean of ``phi(x_1 ... x_n)`` over ``samples`` independent walks.

    Samples are drawn in fixed-size shards, shard ``i`` seeded from
    ``(seed, i)``, and merged in shard order, so the result depends only on
    ``seed`` and ``samples``.
    """
    if samples < 1 or n < 1:
        raise ValueError("need samples >= 1 and walk length n >= 1")
    if m.kind == "custom" and m.sampler is None:
        raise SamplerUnavailable("this measure has no sampler")
    dim = m.dimension ** degree
    total = np.zeros((dim, dim), dtype=complex)
    total_sq = np.zeros((dim, dim))
    done, shard = 0, 0
    while done < samples:
        size = min(SHARD_SIZE, samples - done)
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), shard]))
        prod = m.sample(rng, size)
        for _ in range(n - 1):
            prod = prod @ m.sample(rng, size)
        phi = kron_power(prod, degree)
        total += phi.sum(axis=0)
        total_sq += (np.abs(phi) ** 2).sum(axis=0)
        done += size
        shard += 1
    mean = total / samples
    var = np.maximum(total_sq / samples - np.abs(mean) ** 2, 0.0)
    if samples > 1:
        var = var * samples / (samples - 1)
    se = np.sqrt(var / samples)
    return MomentOperator(mean, degree=degree, walk_length=n, samples=samples, seed=int(seed),
                          standard_error=se)


@dataclass(frozen=True, eq=False)
class FiniteOrbit:
    """Finite group generated by matrix atoms, with the atom-to-element map."""

    group: FiniteGroup
    matrices: np.ndarray
    atom_elements: tuple[int, ...]

    def distribution(self, m: MatrixMeasure) -> Distribution:
        probs = np.zeros(self.group.order)
        for a, p in zip(self.atom_elements, m.probs):
            probs[a] += p
        return Distribution(self.group, probs)


def classify_finite_orbit(m: MatrixMeasure, cap: int = 1024, tol: float = 1e-8) -> FiniteOrbit:
    """Close the atoms of ``m`` under multiplication and return the abstract group.

    Elements are numbered in BFS order from the identity matrix, extending each
    element on the right by the atoms in order.  Two products within ``tol``
    (Frobenius) are the same element; a product within ``1000*tol`` of a known
    element but not within ``tol``, or within ``tol`` of two elements, raises
    :class:`ToleranceCollision`.  More than ``cap`` elements raises
    :class:`TooLarge`.
    """
    if m.kind != "finite_atoms":
        raise ValueError("classify_finite_orbit needs a finite_atoms measure")
    d = m.dimension
    gens = []
    for A in m.atoms:
        if not any(np.linalg.norm(A - B) <= tol for B in gens):
            gens.append(A)
    store = np.empty((cap, d, d), dtype=complex)
    store[0] = np.eye(d)
    count = 1
    parent, via = [-1], [-1]
    right = []

    def locate(M):
        dist = np.linalg.norm(store[:count] - M, axis=(1, 2))
        hits = np.flatnonzero(dist <= tol)
        if hits.size > 1:
            raise ToleranceCollision(f"product within {tol} of elements {hits.tolist()}; use a tighter tol")
        if hits.size == 1:
            return int(hits[0])
        if dist.min() <= 1000 * tol:
            raise ToleranceCollision(
                f"product at distance {dist.min():.3g} from element {int(dist.argmin())}; "
                f"neither equal nor clearly distinct at tol={tol}")
        return -1

    i = 0
    while i < count:
        row = []
        for g, A in enumerate(gens):
            M = store[i] @ A
            j = locate(M)
            if j < 0:
                if count >= cap:
                    raise TooLarge(f"closure exceeded {cap} elements; group presumed infinite")
                store[count] = M
                parent.append(i)
                via.append(g)
                j = count
                count += 1
            row.append(j)
        right.append(row)
        i += 1

    n = count
    right = np.array(right, dtype=np.int64).reshape(n, len(gens))
    table = np.empty((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    # BFS order: parent[b] < b, and b = parent[b] * gens[via[b]]
    for b in range(1, n):
        table[:, b] = right[table[:, parent[b]], via[b]]
    gen_idx = sorted({int(right[0, g]) for g in range(len(gens))})
    labels = ["e"] + [f"g{k}" for k in range(1, n)]
    group = _make_group(table, labels, generators=gen_idx or None)
    atom_elements = []
    for A in m.atoms:
        atom_elements.append(next(j for j in range(n) if np.linalg.norm(store[j] - A) <= tol))
    mats = store[:n].copy()
    mats.setflags(write=False)
    return FiniteOrbit(group, mats, tuple(atom_elements))
