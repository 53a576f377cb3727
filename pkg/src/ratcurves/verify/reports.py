"""Single-shot reports behind the ``check``, ``dims``, ``solve`` and ``sample`` commands."""

from __future__ import annotations

from ..errors import GenericSampleNotFound
from ..exact import stream
from ..geometry import expected_dim_mor, expected_fiber_dim, hilbert_dim, m_by_containment, strict_from_total
from ..incidence import random_incidence_data, sample_fiber_member, sigma_fiber, tau_fiber
from .config import SCHEMA_VERSION, RunConfig
from .experiments import hypothesis_summary


def _header(run: RunConfig, report: str) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "report": report,
        "config": run.name,
        "field": run.field_config.to_dict(),
        "seed": run.seed,
        "ambient": list(run.tower.ambient.factor_dims),
        "beta": run.beta.to_dict(),
    }


def check_report(run: RunConfig) -> dict:
    d = _header(run, "check")
    d["hypotheses"] = hypothesis_summary(run.tower, run.beta)
    d["m_by_containment"] = list(m_by_containment(run.tower))
    d["ok"] = d["hypotheses"]["verdict"] == "pass"
    return d


def dims_report(run: RunConfig) -> dict:
    t, b = run.tower, run.beta
    d = _header(run, "dims")
    d["e_strict"] = list(strict_from_total(t, b))
    d["expected_dim_mor"] = expected_dim_mor(t, b)
    fiber = expected_fiber_dim(t, b)
    d["expected_fiber_dim"] = fiber
    d["expected_empty"] = fiber < 0
    d["hilbert_dim"] = hilbert_dim(t, b)
    d["ok"] = True
    return d


def solve_data(run: RunConfig) -> list:
    """Config data if given, else the data of fiber-dimension trial 0."""
    if run.data:
        return list(run.data)
    return random_incidence_data(run.tower, run.beta, stream(run.seed, "fiber-dimension", 0))


def solve_report(run: RunConfig) -> dict:
    F = run.field
    d = _header(run, "solve")
    if run.jets and not run.data:
        fib = tau_fiber(F, run.tower.ambient, run.beta.degrees, run.jets)
        d["fiber"] = "tau"
        d["jets"] = [s.to_dict(F) for s in run.jets]
    else:
        data = solve_data(run)
        fib = sigma_fiber(run.tower, run.beta, data)
        d["fiber"] = "sigma"
        d["data"] = [x.to_dict(F) for x in data]
    d["result"] = fib.to_dict(include_basis=True, field=F)
    d["ok"] = fib.splitting_bounds_ok
    return d


def sample_report(run: RunConfig) -> dict:
    F = run.field
    d = _header(run, "sample")
    rng = stream(run.seed, "freeness", 0)
    data = list(run.data) if run.data else random_incidence_data(run.tower, run.beta, rng)
    fib = sigma_fiber(run.tower, run.beta, data)
    d["data"] = [x.to_dict(F) for x in data]
    d["projective_dim"] = fib.projective_dim
    try:
        sample = sample_fiber_member(fib, run.tower, run.beta, data, rng, run.experiment.retries)
    except GenericSampleNotFound as exc:
        d["error"] = str(exc)
        d["ok"] = False
        return d
    d["sample"] = sample.to_dict()
    d["ok"] = True
    return d
