"""End-to-end experiment: how concentrated is a (critical) set along a Bohr-smoothed progression?"""
from __future__ import annotations

import numpy as np

from .bohr import extract_ap_from_convolution, translate_runs
from .constructions import ImproveParams, _run, improve_critical_candidate, smoothing_stages
from .critical import AnnealSchedule, anneal_critical, exhaustive_critical, size_for_density
from .errors import ValidationError
from .report import ExperimentReport
from .scales import large_spectrum_threshold
from .zpz import ResidueSet, as_modulus, longest_ap, make_residue_set, random_set

DEFAULTS = {
    "threshold": None,  # None: p loglog p / sqrt(log p)
    "eps": 0.2,
    "length": 4,
    "concentration_target": 0.25,
    "compare_samples": 32,
    "improve": False,
}
KNOWN_KEYS = set(DEFAULTS) | {"p", "seed", "members", "density", "minimizer", "improve_params"}


def resolve_set(config: dict) -> tuple[ResidueSet, dict]:
    """The set under study, plus a description for the report."""
    seed = config["seed"]
    if "p" not in config:
        raise ValidationError("p required")
    m = as_modulus(config["p"])
    if "members" in config:
        return make_residue_set(m, config["members"]), {"source": "members"}
    if "minimizer" in config:
        spec = dict(config["minimizer"])
        s = spec.get("s") or size_for_density(m.p, spec["density"])
        method = spec.get("method", "exhaustive")
        index = int(spec.get("index", 0))
        if method == "exhaustive":
            res = exhaustive_critical(m, s, cap=index + 1)
        elif method == "anneal":
            res = anneal_critical(m, s, AnnealSchedule(**spec.get("schedule", {})), seed)
        else:
            raise ValidationError(f"unknown search method {method!r}")
        if index >= len(res.minimizers):
            raise ValidationError(f"minimizer index {index} out of range")
        return res.minimizers[index], {
            "source": "minimizer",
            "method": method,
            "min_count": res.min_count,
            "n_minimizers": res.n_minimizers,
            "index": index,
        }
    if "density" in config:
        rng = np.random.default_rng(seed)
        s = size_for_density(m.p, config["density"])
        return random_set(m, s, rng), {"source": "random", "density": config["density"]}
    raise ValidationError("config needs one of members, density, minimizer")


def validate_config(config: dict) -> dict:
    if not isinstance(config, dict):
        raise ValidationError("config must be a JSON object")
    unknown = set(config) - KNOWN_KEYS
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    if config.get("seed") is None:
        raise ValidationError("seed required")
    out = dict(DEFAULTS)
    out.update(config)
    return out


def run_theorem_experiment(config: dict) -> ExperimentReport:
    """Spectrum split, Bohr step, smoothing, dense translate, extracted AP,
    and a longest-AP comparison against random sets of the same size.

    Every random choice is derived from ``config["seed"]``.
    """
    cfg = validate_config(config)
    S, source = resolve_set(cfg)
    if S.cardinality == 0:
        raise ValidationError("the set under study is empty")
    p = S.p
    threshold = cfg["threshold"]
    if threshold is None:
        threshold = large_spectrum_threshold(p)
    cfg = {**cfg, "p": p, "threshold": threshold}
    report = ExperimentReport("experiment", cfg)
    with report.stage("input", {"set": S.to_list()}) as st:
        st.outputs = {"members": S.to_list(), "size": S.cardinality, **source}

    split, N, conv, m = smoothing_stages(S, threshold, cfg["eps"], cfg["length"], report)
    peak = float(conv.values[m])
    target = cfg["concentration_target"]
    with report.stage("dense_translate", {"m": m, "target": target}) as st:
        run, misses = translate_runs(S, N, m)
        hits = N.length - misses
        st.outputs = {
            "max_convolution": peak,
            "argmax_m": m,
            "dense_translate_ratio": hits / N.length,
            "translate": N.translate(m).tolist(),
            "longest_run_in_translate": run,
        }
        extracted = None
        if peak > 1 - target:
            extracted = _run("dense_translate", extract_ap_from_convolution, S, N, m, target)
        st.certificates = {"threshold_met": peak > 1 - target, "extracted_run": extracted}

    own = longest_ap(S)
    with report.stage("longest_ap", {"set": S.to_list()}) as st:
        st.outputs = {"run": own, "elements": own.elements(p)}
        st.certificates = {"contained_in_set": own.contained_in(S)}

    samples = int(cfg["compare_samples"])
    if samples > 0:
        with report.stage("random_comparison", {"seed": cfg["seed"], "samples": samples}) as st:
            rng = np.random.default_rng([int(cfg["seed"]), 17])
            lengths = [longest_ap(random_set(S.modulus, S.cardinality, rng)).length for _ in range(samples)]
            st.outputs = {
                "samples": samples,
                "mean_length": float(np.mean(lengths)),
                "max_length": int(max(lengths)),
                "min_length": int(min(lengths)),
                "fraction_at_least_set": float(np.mean([x >= own.length for x in lengths])),
            }

    if cfg["improve"]:
        params = dict(cfg.get("improve_params") or {})
        params.setdefault("seed", cfg["seed"])
        for key in ("eps", "length", "concentration_target"):
            params.setdefault(key, cfg[key])
        params.setdefault("threshold", threshold)
        imp = ImproveParams.from_dict(params)
        C1, sub = improve_critical_candidate(S, imp)
        with report.stage("improve", {"params": imp.to_dict()}) as st:
            st.outputs = {
                "verdict": sub.verdict,
                "stages": [s.name for s in sub.stages],
                "size": C1.cardinality,
                "members": C1.to_list(),
            }
            st.certificates = {"size_matches": C1.cardinality == S.cardinality}

    if peak > 1 - target:
        report.verdict = (
            f"dense translate: (S*N)({m}) = {peak:.6g} > {1 - target:.6g}; "
            f"AP of length {extracted.length} extracted; longest AP in S has length {own.length}"
        )
    else:
        report.verdict = (
            f"no dense translate: max (S*N) = {peak:.6g} <= {1 - target:.6g}; "
            f"longest AP in S has length {own.length}"
        )
    return report
