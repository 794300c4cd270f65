"""Seeded verification suites over the position-bias lab.

Each suite returns a report dict with a boolean "passed"; `run_suites`
aggregates them for the CLI.
"""

from __future__ import annotations

import numpy as np

from .compress import CompressionConfig, compress
from .posbias import (
    StructuralViolationError,
    correlated_residual_mc,
    NoiseSpec,
    nystrom_assignment_matrix,
    permutation_invariance_check,
    residual_variance_mc,
    rope_residual_scan,
    sinusoidal_residual_scan,
)
from .tensor import HiddenStates, make_rng

SUITES = ("perm", "attenuation", "correlated", "sinusoidal", "rope", "nystrom")


def _random_states(rng, n=32, d=8) -> HiddenStates:
    return HiddenStates(
        context=rng.standard_normal((n, d)),
        query=rng.standard_normal((4, d)),
    )


def suite_perm(seed: int = 0, trials: int = 100) -> dict:
    rng = make_rng(seed)
    h = _random_states(rng)
    report = permutation_invariance_check(
        h, CompressionConfig(tau=4), trials=trials, rng=rng
    )
    return {"seed": seed, **report.to_dict()}


def suite_attenuation(seed: int = 0, trials: int = 10_000) -> dict:
    rng = make_rng(seed)
    noise = NoiseSpec(sigma_p=1.0)
    reports = []
    ok = True
    for g in (4, 16, 64):
        rep = residual_variance_mc(g, noise, dim=8, weights="uniform", trials=trials, rng=rng)
        ok &= rep.relative_error < 0.05
        reports.append(rep.to_dict())
    rep = residual_variance_mc(8, noise, dim=8, weights="random-softmax", trials=trials, rng=rng)
    ok &= rep.relative_error < 0.05
    reports.append({"weights": "random-softmax", **rep.to_dict()})
    return {"seed": seed, "reports": reports, "passed": bool(ok)}


def suite_correlated(seed: int = 0, trials: int = 10_000) -> dict:
    rng = make_rng(seed)
    scaled = []
    reports = []
    ok = True
    for g in (4, 16, 64):
        rep = correlated_residual_mc(g, gamma=0.5, sigma_p=1.0, dim=8, trials=trials, rng=rng)
        ok &= rep.relative_error < 0.05
        scaled.append(rep.empirical_mse * g)
        reports.append(rep.to_dict())
    ok &= max(scaled) <= 2.0 * min(scaled)
    hand = correlated_residual_mc(2, gamma=0.5, sigma_p=1.0, dim=1, trials=trials, rng=rng)
    ok &= abs(hand.empirical_mse - 0.75) / 0.75 < 0.05
    reports.append({"hand_case": True, **hand.to_dict()})
    return {"seed": seed, "reports": reports, "scaled_mse": scaled, "passed": bool(ok)}


def suite_sinusoidal(seed: int = 0, trials: int = 10_000) -> dict:
    rng = make_rng(seed)
    report = sinusoidal_residual_scan((4, 16, 64, 256), omega=1.0, dim=8, trials=trials, rng=rng)
    passed = -1.2 <= report.slope <= -0.8
    return {"seed": seed, **report.to_dict(), "passed": bool(passed)}


def suite_rope(seed: int = 0, trials: int = 2_000) -> dict:
    rng = make_rng(seed)
    spreads = (0.01, 0.1, 0.5)
    sizes = (4, 16, 64, 256)
    report = rope_residual_scan(spreads, sizes, dim=8, trials=trials, rng=rng)
    by_cell = {(dt, g): v for dt, g, v in report.cells}
    mono_spread = by_cell[(0.01, 64)] < by_cell[(0.1, 64)] < by_cell[(0.5, 64)]
    mono_group = by_cell[(0.1, 256)] <= by_cell[(0.1, 4)]
    nonneg = report.coef_spread >= 0.0 and report.coef_group >= 0.0
    return {
        "seed": seed,
        **report.to_dict(),
        "monotone_in_spread": bool(mono_spread),
        "decreasing_in_group": bool(mono_group),
        "nonnegative_fit": bool(nonneg),
        "passed": bool(mono_spread and mono_group and nonneg),
    }


def suite_nystrom(seed: int = 0, trials: int = 1_000) -> dict:
    rng = make_rng(seed)
    worst = 0.0
    passed = True
    for _ in range(trials):
        n = int(rng.integers(2, 65))
        d = int(rng.integers(2, 33))
        h = _random_states(rng, n=n, d=d)
        tau = int(rng.choice((2, 4, 8, 16, 32)))
        res = compress(h, CompressionConfig(tau=tau))
        try:
            _, rep = nystrom_assignment_matrix(res, h.context)
            worst = max(worst, rep.max_reconstruction_error)
        except StructuralViolationError:
            passed = False
    return {"seed": seed, "instances": trials, "max_error": worst, "passed": bool(passed)}


_RUNNERS = {
    "perm": suite_perm,
    "attenuation": suite_attenuation,
    "correlated": suite_correlated,
    "sinusoidal": suite_sinusoidal,
    "rope": suite_rope,
    "nystrom": suite_nystrom,
}


def run_suites(names, seed: int = 0, trials: int | None = None) -> dict:
    """Run the requested suites; "all" expands to every suite."""
    if names == "all" or names == ["all"]:
        names = list(SUITES)
    elif isinstance(names, str):
        names = [names]
    results = {}
    for name in names:
        if name not in _RUNNERS:
            raise KeyError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
        kwargs = {"seed": seed}
        if trials is not None:
            kwargs["trials"] = trials
        results[name] = _RUNNERS[name](**kwargs)
    results["passed"] = all(r["passed"] for r in results.values())
    return results
