"""Spectral certificates for random walks on finite groups.

The transition operator of the walk is the averaged right regular
representation, ``T[x, y] = p(x^-1 y)``.  The regular representation contains
every irreducible one, so the whole convergence question reduces to a single
``n x n`` eigenproblem: the walk converges iff, on the block of ``T`` acting on
the support subgroup, ``1`` is the only eigenvalue on the unit circle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .errors import CapExceeded, EigensolverFailure, Indeterminate, InsufficientData
from .measure import Distribution, decay_trace, support_subgroup

__all__ = [
    "DEFAULT_EIG_CAP",
    "CONVERGES",
    "DIVERGES",
    "TransitionOperator",
    "SpectralSummary",
    "transition_operator",
    "spectrum",
    "spectral_verdict",
    "decay_rate_fit",
    "estimate_second_modulus",
    "jordan_power",
]

DEFAULT_EIG_CAP = 512
CONVERGES = "Converges"
DIVERGES = "Diverges"

# eigenvalues closer than this to the unit circle count as exactly on it
_CIRCLE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TransitionOperator:
    group: object
    matrix: np.ndarray
    step: Distribution


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    eigenvalues: np.ndarray
    unit_circle_count: int
    second_modulus: float
    tol: float

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "unit_circle_count": int(self.unit_circle_count),
            "second_modulus": float(self.second_modulus),
            "tol": float(self.tol),
        }


def transition_operator(p: Distribution) -> TransitionOperator:
    """Row ``x`` of the matrix is ``p`` translated by ``x``: ``T[x, x*a] = p(a)``."""
    G = p.group
    n = G.order
    M = np.zeros((n, n))
    M[np.arange(n)[:, None], G.cayley] = p.as_float().probs[None, :]
    M.setflags(write=False)
    return TransitionOperator(G, M, p)


def _sorted_eigvals(M: np.ndarray) -> np.ndarray:
    try:
        lam = scipy.linalg.eigvals(M, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(str(exc)) from exc
    order = np.lexsort((np.angle(lam), -np.abs(lam)))
    return lam[order]


def spectrum(T: TransitionOperator, tol: float = 1e-9, cap: int = DEFAULT_EIG_CAP) -> SpectralSummary:
    """Full spectrum of ``T`` with unit-circle census and second modulus.

    ``second_modulus`` drops one eigenvalue ``1`` for every block of the walk
    (one per left coset of the support subgroup) and reports the largest
    modulus among the rest.
    """
    n = T.matrix.shape[0]
    if n > cap:
        raise CapExceeded(f"dense eigensolver capped at order {cap}, got {n}")
    lam = _sorted_eigvals(T.matrix)
    mod = np.abs(lam)
    blocks = n // support_subgroup(T.step).order
    keep = np.ones(n, dtype=bool)
    keep[np.argsort(np.abs(lam - 1.0), kind="stable")[:blocks]] = False
    second = float(mod[keep].max()) if keep.any() else 0.0
    return SpectralSummary(lam, int((mod >= 1 - tol).sum()), second, tol)


def spectral_verdict(p: Distribution, tol: float = 1e-9, cap: int = DEFAULT_EIG_CAP) -> str:
    """Decide convergence from the eigenvalues of ``T`` restricted to the support subgroup.

    Returns :data:`CONVERGES` when exactly one eigenvalue has modulus at least
    ``1 - tol``, :data:`DIVERGES` when several do and all of them are
    numerically roots of unity.  Anything in between raises
    :class:`~groupwalk.errors.Indeterminate`.
    """
    H = support_subgroup(p)
    if H.order > cap:
        raise CapExceeded(f"dense eigensolver capped at order {cap}, got {H.order}")
    m = np.asarray(H.members)
    block = transition_operator(p).matrix[np.ix_(m, m)]
    lam = _sorted_eigvals(block)
    near = lam[np.abs(lam) >= 1 - tol]
    if near.size == 1 and abs(near[0] - 1) <= _CIRCLE_TOL:
        return CONVERGES
    on_circle = (np.abs(np.abs(near) - 1) <= _CIRCLE_TOL) & (np.abs(near ** H.order - 1) <= 1e-6)
    if near.size >= 2 and on_circle.all():
        return DIVERGES
    raise Indeterminate(
        f"{near.size} eigenvalue(s) within {tol} of the unit circle, "
        f"moduli {sorted(np.abs(near).tolist())}")


def _log(x) -> float:
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def decay_rate_fit(trace, window: int = 20) -> float:
    """Geometric-mean ratio ``(d(N) / d(N - window)) ** (1/window)`` over the trace tail."""
    values = [d for _, d in trace]
    if any(d == 0 for d in values):
        return 0.0
    positive = [d for d in values if d > 0]
    if window < 1 or len(positive) < window + 5:
        raise InsufficientData(f"need at least {window + 5} positive entries, got {len(positive)}")
    return math.exp((_log(values[-1]) - _log(values[-1 - window])) / window)


def estimate_second_modulus(p: Distribution, n_max: int = 3000, window: int = 200,
                            floor: float = 1e-250) -> float:
    """Power-iteration style estimate for groups above the dense eigensolver cap."""
    trace = decay_trace(p.as_float(), n_max, stop_below=floor)
    if any(d == 0 for _, d in trace):
        return 0.0
    return decay_rate_fit(trace, max(1, min(window, len(trace) - 5)))


def jordan_power(m: int, lam: complex, n: int) -> np.ndarray:
    """``J_m(lam) ** n`` in closed form: entry ``(i, i+k)`` is ``C(n, k) lam^(n-k)``."""
    if m < 1 or n < 0:
        raise ValueError("jordan_power needs m >= 1 and n >= 0")
    lam = complex(lam)
    out = np.zeros((m, m), dtype=complex)
    idx = np.arange(m)
    for k in range(min(m, n + 1)):
        out[idx[:m - k], idx[k:]] = math.comb(n, k) * lam ** (n - k)
    return out
