"""ap3lab command line.

Exit codes: 0 success, 2 invalid input (bad flags, files, configs), 3 a
pipeline stage failed (search exhausted, certificate violated, ...).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .apcount import count_3aps_naive, count_3aps_spectral, split_spectrum
from .bohr import (
    BohrSpec,
    SmoothingProgression,
    bohr_element,
    convolve,
    extract_ap_from_convolution,
    spectrum_flatness,
    translate_runs,
)
from .constructions import ImproveParams, improve_critical_candidate, sample_intersection, two_interval_set
from .critical import AnnealSchedule, anneal_critical, exhaustive_critical, varnavides_estimate
from .errors import Ap3Error, StageError, ValidationError
from .experiment import run_theorem_experiment
from .fourier import dft
from .report import emit
from .rounding import round_weights
from .zpz import load_set, load_weights

VARNAVIDES_HEADER = ["d", "s", "min_count", "ratio"]


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc


def cmd_count(args):
    S = load_set(args.set)
    out = {"p": S.p, "size": S.cardinality, "total": None, "trivial": None, "nontrivial": None,
           "spectral_value": None, "agreement": None}
    if args.method in ("naive", "both"):
        c = count_3aps_naive(S)
        out.update(c.to_dict())
    if args.method in ("spectral", "both"):
        out["spectral_value"] = count_3aps_spectral(S)
    if args.method == "both":
        out["agreement"] = abs(out["spectral_value"] - out["total"]) <= 1e-6 * max(1, out["total"])
    return out


def cmd_spectrum(args):
    F = dft(load_set(args.set))
    if (args.format or "csv") == "csv":
        return F.to_csv()
    return {"p": F.modulus.p, "coeffs": [[z.real, z.imag] for z in F.coeffs.tolist()]}


def cmd_bohr(args):
    S = load_set(args.set)
    split = split_spectrum(S, args.threshold)
    n0 = bohr_element(BohrSpec(S.modulus, split.large_freqs, args.eps))
    N = SmoothingProgression(S.modulus, n0, args.length)
    w = convolve(S, N)
    m = int(w.values.argmax())
    peak = float(w.values[m])
    extracted = None
    if peak > 1 - args.extract_eps:
        extracted = extract_ap_from_convolution(S, N, m, args.extract_eps)
    return {
        "n0": n0,
        "large_freqs": list(split.large_freqs),
        "flatness": spectrum_flatness(N, split.large_freqs),
        "max_convolution": peak,
        "argmax_m": m,
        "longest_run_in_translate": translate_runs(S, N, m)[0],
        "extracted_run": extracted,
    }


def cmd_round(args):
    w = load_weights(args.weights)
    S, cert = round_weights(w, args.seed, args.bound_factor, args.max_attempts)
    cert.verify(S, w)
    return {"p": w.p, "members": S.to_list(), "certificate": cert.to_dict()}


def cmd_intersect(args):
    A, B = load_set(args.a), load_set(args.b)
    return sample_intersection(A, B, args.eps, args.max_draws, args.seed)


def cmd_two_interval(args):
    return two_interval_set(args.p, args.theta)


def cmd_improve(args):
    doc = _load_json(args.config)
    if args.seed is not None:
        doc["seed"] = args.seed
    params = ImproveParams.from_dict(doc)
    _, report = improve_critical_candidate(load_set(args.set), params)
    return report


def cmd_search(args):
    if args.method == "exhaustive":
        return exhaustive_critical(args.p, args.s, cap=args.cap)
    if args.seed is None:
        raise ValidationError("seed required for annealing")
    schedule = AnnealSchedule(args.steps, args.t_start, args.t_end)
    return anneal_critical(args.p, args.s, schedule, args.seed)


def cmd_varnavides(args):
    try:
        grid = [float(x) for x in args.densities.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad density list: {exc}") from exc
    return varnavides_estimate(args.p, grid, seed=args.seed)


def cmd_experiment(args):
    config = _load_json(args.config) if args.config else {}
    for key in ("p", "seed"):
        if getattr(args, key) is not None:
            config[key] = getattr(args, key)
    if args.set:
        S = load_set(args.set)
        config["p"], config["members"] = S.p, S.to_list()
    return run_theorem_experiment(config)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    parser = argparse.ArgumentParser(prog="ap3lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_, default_format="json"):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=fn, default_format=default_format)
        return sp

    sp = add("count", cmd_count, "count 3-term progressions in a set")
    sp.add_argument("--set", required=True)
    sp.add_argument("--method", choices=("naive", "spectral", "both"), default="both")

    sp = add("spectrum", cmd_spectrum, "dump the DFT of a set (CSV rows a,re,im, or JSON)", "csv")
    sp.add_argument("--set", required=True)

    sp = add("bohr", cmd_bohr, "Bohr step, smoothing progression, convolution peak, extracted AP")
    sp.add_argument("--set", required=True)
    sp.add_argument("--threshold", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--extract-eps", type=float, default=0.5)

    sp = add("round", cmd_round, "randomised rounding of a weight function with a certificate")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--bound-factor", type=float, default=1.0)
    sp.add_argument("--max-attempts", type=int, default=64)

    sp = add("intersect", cmd_intersect, "sample an affine intersection A ∩ (uB + v)")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--max-draws", type=int, default=20000)

    sp = add("two-interval", cmd_two_interval, "the two-interval low-3AP set and its bounds")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--theta", type=float, required=True)

    sp = add("improve", cmd_improve, "run the improvement pipeline on a set")
    sp.add_argument("--set", required=True)
    sp.add_argument("--config", required=True)
    sp.add_argument("--seed", type=int, default=None)

    sp = add("search", cmd_search, "find 3AP-minimising sets of a given size")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--method", choices=("exhaustive", "anneal"), default="exhaustive")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--cap", type=int, default=1000)
    sp.add_argument("--steps", type=int, default=AnnealSchedule.steps)
    sp.add_argument("--t-start", type=float, default=AnnealSchedule.t_start)
    sp.add_argument("--t-end", type=float, default=AnnealSchedule.t_end)

    sp = add("varnavides", cmd_varnavides, "minimum 3AP count / p^2 across densities", "csv")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--densities", required=True, help="comma-separated, e.g. 0.2,0.4,0.6")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("experiment", cmd_experiment, "end-to-end concentration experiment from a JSON config")
    sp.add_argument("--config", default=None)
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--set", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = args.format or args.default_format
    try:
        result = args.func(args)
        if isinstance(result, str):
            if args.out == "-":
                sys.stdout.write(result)
            else:
                Path(args.out).write_text(result)
        elif args.command == "varnavides":
            emit(result, fmt, args.out, header=VARNAVIDES_HEADER)
        else:
            emit(result, fmt, args.out)
    except ValidationError as exc:
        print(f"ap3lab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ap3lab: error: {exc}", file=sys.stderr)
        return 2
    except (StageError, Ap3Error) as exc:
        print(f"ap3lab: stage error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
