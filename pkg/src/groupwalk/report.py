"""Assemble the machine-readable outputs behind each CLI command.

Every builder returns ``(payload, exit_code)`` and is deterministic given the
config, including its seed.
"""
from __future__ import annotations

import csv
import io
import json
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .errors import Indeterminate, NoClosedForm, InsufficientData, SamplerUnavailable, TooLarge
from .matrix_walk import classify_finite_orbit, estimate_moment, moment_check, moment_power_norm
from .measure import Distribution, convolve, decay_trace, support_subgroup
from .obstruction import Converges, verdict
from .spectral import (
    CONVERGES,
    DIVERGES,
    decay_rate_fit,
    estimate_second_modulus,
    spectral_verdict,
    spectrum,
    transition_operator,
)

SCHEMA_VERSION = 1

EXIT_CONVERGES = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2
EXIT_DIVERGES = 3
EXIT_INDETERMINATE = 4

__all__ = [
    "SCHEMA_VERSION",
    "analyze_report",
    "convolve_table",
    "spectrum_report",
    "sample_report",
    "dump_json",
    "load_schema",
]


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_schema(name: str) -> dict:
    """Shipped JSON schema: ``report``, ``spectrum``, ``sample`` or ``convolve`` (one CSV row)."""
    text = resources.files("groupwalk").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _num(x, exact: bool):
    return str(x) if exact else float(x)


def _header(cfg) -> dict:
    return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "config": cfg.raw}


def _spectral_section(p: Distribution, opts) -> dict:
    if p.group.order > opts.eig_cap:
        return {"estimate": True, "second_modulus": estimate_second_modulus(p), "verdict": None}
    summary = spectrum(transition_operator(p), tol=opts.tol, cap=opts.eig_cap).to_dict()
    try:
        sv = spectral_verdict(p, tol=opts.tol, cap=opts.eig_cap)
    except Indeterminate:
        sv = "Indeterminate"
    return {"estimate": False, **summary, "verdict": sv}


def _finite_analysis(G, p: Distribution, cfg) -> tuple[dict, int]:
    opts = cfg.options
    thr = opts.atom_threshold
    exact = p.exact
    H = support_subgroup(p, thr)
    v = verdict(p, thr)
    converged = isinstance(v, Converges)
    out = {
        "verdict": CONVERGES if converged else DIVERGES,
        "certified": True,
        "group_order": G.order,
        "support": {
            "atoms": list(p.support(thr)),
            "members": list(H.members),
            "labels": [G.labels[i] for i in H.members],
            "order": H.order,
        },
    }
    if converged:
        out["limit"] = {"members": list(H.members), "mass": f"1/{H.order}"}
        out["obstruction"] = {"present": False}
    else:
        out["limit"] = None
        out["obstruction"] = {"present": True, **v.obstruction.to_dict()}
    out["spectral"] = _spectral_section(p, opts)
    trace = decay_trace(p, opts.n_max, thr)
    try:
        rate = decay_rate_fit(trace, opts.window)
    except InsufficientData:
        rate = None
    section = {
        "backend": "rational" if exact else "float",
        "values": [[n, _num(d, exact)] for n, d in trace],
        "rate_fit": rate,
        "path": opts.trace_out,
    }
    if opts.trace_out:
        path = Path(opts.trace_out)
        if not path.is_absolute():
            path = cfg.base_dir / path
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "tv_distance"])
        w.writerows([n, _num(d, exact)] for n, d in trace)
        path.write_text(buf.getvalue())
    out["decay_trace"] = section
    return out, EXIT_CONVERGES if converged else EXIT_DIVERGES


def _matrix_analysis(cfg) -> tuple[dict, int]:
    m = cfg.measure
    opts = cfg.options
    out = {}
    orbit = None
    section = {"kind": m.kind, "dimension": m.dimension, "orbit": None}
    if m.kind == "finite_atoms":
        try:
            orbit = classify_finite_orbit(m, cap=opts.orbit_cap, tol=opts.orbit_tol)
        except TooLarge:
            section["orbit"] = {"finite": False, "cap": opts.orbit_cap}
    check = moment_check(m, degree_max=opts.tensor_degree, n=opts.n_max, tol=opts.tol)
    section["moment_check"] = check.to_dict()
    section["moment_power_norm"] = {
        str(k): moment_power_norm(m.mean(k), opts.n_max) for k in range(1, opts.tensor_degree + 1)}
    if orbit is not None:
        section["orbit"] = {"finite": True, "order": orbit.group.order,
                            "atom_elements": list(orbit.atom_elements)}
        p = orbit.distribution(m)
        if cfg.exact:
            p = p.as_exact()
        out, code = _finite_analysis(orbit.group, p, cfg)
    else:
        out = {
            "verdict": CONVERGES if check.converges else DIVERGES,
            # a unit eigenvalue other than 1 rules convergence out; the converse is unproven
            "certified": not check.converges,
            "group_order": None,
            "support": None,
            "limit": None,
            "obstruction": None,
            "spectral": None,
            "decay_trace": None,
        }
        code = EXIT_CONVERGES if check.converges else EXIT_DIVERGES
    out["matrix_walk"] = section
    return out, code


def analyze_report(cfg) -> tuple[dict, int]:
    if cfg.measure is not None:
        body, code = _matrix_analysis(cfg)
    else:
        body, code = _finite_analysis(cfg.group, cfg.distribution, cfg)
        body["matrix_walk"] = None
    return {**_header(cfg), **body}, code


def convolve_table(cfg, steps: int) -> tuple[str, int]:
    """CSV with one row per element and one column per walk length ``1..steps``."""
    if cfg.distribution is None:
        raise SamplerUnavailable("convolve needs a finite group and distribution")
    p = cfg.distribution
    G = p.group
    cols = [p]
    for _ in range(steps - 1):
        cols.append(convolve(cols[-1], p))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "label"] + [f"n={k}" for k in range(1, steps + 1)])
    for a in range(G.order):
        w.writerow([a, G.labels[a]] + [_num(c.probs[a], p.exact) for c in cols])
    return buf.getvalue(), EXIT_CONVERGES


def spectrum_report(cfg) -> tuple[dict, int]:
    opts = cfg.options
    if cfg.distribution is not None:
        p = cfg.distribution
    elif cfg.measure is not None and cfg.measure.kind == "finite_atoms":
        try:
            orbit = classify_finite_orbit(cfg.measure, cap=opts.orbit_cap, tol=opts.orbit_tol)
        except TooLarge:
            raise SamplerUnavailable("spectrum needs a finite group; the atoms generate an infinite one")
        p = orbit.distribution(cfg.measure)
    else:
        raise SamplerUnavailable("spectrum needs a finite group")
    summary = spectrum(transition_operator(p), tol=opts.tol, cap=opts.eig_cap)
    try:
        sv = spectral_verdict(p, tol=opts.tol, cap=opts.eig_cap)
        code = EXIT_CONVERGES if sv == CONVERGES else EXIT_DIVERGES
    except Indeterminate:
        sv, code = "Indeterminate", EXIT_INDETERMINATE
    return {**_header(cfg), "spectrum": summary.to_dict(), "verdict": sv}, code


def sample_report(cfg) -> tuple[dict, int]:
    if cfg.measure is None:
        raise SamplerUnavailable("sample needs a matrix_measure config")
    opts = cfg.options
    m = cfg.measure
    est = estimate_moment(m, opts.walk_length, opts.samples, opts.seed)
    try:
        Tn = np.linalg.matrix_power(m.mean(1), opts.walk_length)
        closed = [[[float(z.real), float(z.imag)] for z in row] for row in Tn]
    except NoClosedForm:
        closed = None
    return {**_header(cfg), **est.to_dict(), "closed_form": closed}, EXIT_CONVERGES
