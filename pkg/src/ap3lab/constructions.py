"""Affine intersections A ∩ (uB + v), the two-interval low-3AP set, and the
pipeline that turns a set with no dense translate into a competitor C'."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .apcount import count_3aps, count_3aps_naive, split_spectrum
from .bohr import (
    BohrSpec,
    SmoothingProgression,
    bohr_element,
    convolve,
    extract_ap_from_convolution,
    spectrum_flatness,
)
from .errors import Ap3Error, ConsistencyError, DrawsExhausted, StageError, ValidationError
from .report import ExperimentReport
from .rounding import adjust_cardinality, round_weights
from .zpz import PrimeModulus, ResidueSet, WeightFunction, as_modulus, complement, exact, longest_ap

SLACK = 10


def affine_image(B: ResidueSet, u: int, v: int) -> ResidueSet:
    """{u b + v : b in B}."""
    p = B.p
    if u % p == 0:
        raise ValidationError("u must be nonzero mod p")
    idx = (int(u) % p * B.members + int(v)) % p
    ind = np.zeros(p, dtype=bool)
    ind[idx] = True
    return ResidueSet.from_indicator(B.modulus, ind)


def intersect_affine(A: ResidueSet, B: ResidueSet, u: int, v: int) -> ResidueSet:
    return ResidueSet.from_indicator(A.modulus, A.indicator & affine_image(B, u, v).indicator)


@dataclass(frozen=True)
class IntersectionSample:
    u: int
    v: int
    set: ResidueSet
    density: float
    nontrivial_3aps: int
    draws: int
    size_floor: float
    count_ceiling: float

    def to_dict(self) -> dict:
        return {
            "u": self.u,
            "v": self.v,
            "members": self.set.to_list(),
            "size": self.set.cardinality,
            "density": self.density,
            "nontrivial_3aps": self.nontrivial_3aps,
            "draws": self.draws,
            "size_floor": self.size_floor,
            "count_ceiling": self.count_ceiling,
        }


def intersection_targets(A: ResidueSet, B: ResidueSet, eps: float) -> tuple[float, float]:
    """(size floor, nontrivial-count ceiling) for an accepted intersection.

    With nontriv(A) = alpha gamma^3 p^2 and nontriv(B) = beta delta^3 p^2 the
    ceiling alpha beta (gamma delta)^3 (p^2 + 2 p^1.5) equals
    nontriv(A) nontriv(B) (p^2 + 2 p^1.5) / p^4.
    """
    p = A.p
    floor = (1 - eps) * A.cardinality * B.cardinality / p
    na, nb = count_3aps_naive(A).nontrivial, count_3aps_naive(B).nontrivial
    ceiling = na * nb * (p * p + 2 * p**1.5) / p**4
    return floor, ceiling


def sample_intersection(
    A: ResidueSet, B: ResidueSet, eps: float, max_draws: int, seed: int
) -> IntersectionSample:
    """Draw (u, v), u in [1, p-1], v in [0, p-1], until A ∩ (uB + v) is both
    large and progression-poor. u = 0 is excluded since it collapses uB + v."""
    if A.modulus != B.modulus:
        raise ValidationError("modulus mismatch")
    if A.cardinality == 0 or B.cardinality == 0:
        raise ValidationError("A and B must be nonempty")
    if not 0 < eps < 1:
        raise ValidationError("eps must lie in (0, 1)")
    p = A.p
    floor, ceiling = intersection_targets(A, B, eps)
    rng = np.random.default_rng(seed)
    for draw in range(1, max_draws + 1):
        u = int(rng.integers(1, p))
        v = int(rng.integers(0, p))
        C = intersect_affine(A, B, u, v)
        if C.cardinality < floor:
            continue
        q = count_3aps_naive(C).nontrivial
        if q <= ceiling:
            return IntersectionSample(u, v, C, C.cardinality / p, q, draw, floor, ceiling)
    raise DrawsExhausted(f"no acceptable (u, v) in {max_draws} draws")


@dataclass(frozen=True)
class TwoIntervalSet:
    theta: float
    U: ResidueSet
    Ubar: ResidueSet
    count_U: int
    bound_U: float
    ubar_nontrivial: int
    bound_ubar: float

    def to_dict(self) -> dict:
        return {
            "p": self.U.p,
            "theta": self.theta,
            "ubar_size": self.Ubar.cardinality,
            "u_size": self.U.cardinality,
            "count_u": self.count_U,
            "bound_u": self.bound_U,
            "ubar_nontrivial": self.ubar_nontrivial,
            "bound_ubar": self.bound_ubar,
            "ubar_members": self.Ubar.to_list(),
        }


def two_interval_bar(p: int, theta: float) -> ResidueSet:
    """Integers of [0, theta p/2] ∪ [p/2, p/2 + theta p/2]."""
    t = exact(theta)
    half_width = t * p / 2
    first = range(0, math.floor(half_width) + 1)
    lo = math.ceil(Fraction(p, 2))
    hi = math.floor(Fraction(p, 2) + half_width)
    ind = np.zeros(p, dtype=bool)
    ind[list(first)] = True
    ind[lo : hi + 1] = True
    return ResidueSet.from_indicator(p, ind)


def two_interval_set(p, theta: float, slack: float = SLACK) -> TwoIntervalSet:
    """U = complement of two intervals of total density ~theta.

    Checks count(U) <= p^2 (1 - 3 theta + 2.5 theta^2) + slack p and
    nontriv(U-bar) >= theta^2 p^2 / 2 - slack p.
    """
    m = as_modulus(p)
    if not 0 < theta < 1:
        raise ValidationError("theta must lie in (0, 1)")
    p = m.p
    Ubar = two_interval_bar(p, theta)
    if abs(Ubar.cardinality - theta * p) > 2:
        raise ConsistencyError("two-interval set has the wrong size")
    U = complement(Ubar)
    cu = count_3aps(U)
    nbar = count_3aps_naive(Ubar).nontrivial
    bound_u = p * p * (1 - 3 * theta + 2.5 * theta**2) + slack * p
    bound_bar = theta**2 * p * p / 2 - slack * p
    if cu > bound_u:
        raise ConsistencyError(f"count(U) = {cu} exceeds {bound_u:.1f}")
    if nbar < bound_bar:
        raise ConsistencyError(f"nontriv(U-bar) = {nbar} below {bound_bar:.1f}")
    return TwoIntervalSet(float(theta), U, Ubar, cu, bound_u, nbar, bound_bar)


# ---------------------------------------------------------------------------
# improvement pipeline

def _stage_seed(seed: int, stage: int) -> int:
    return int(np.random.SeedSequence([int(seed), stage]).generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


@dataclass
class ImproveParams:
    threshold: float
    eps: float
    length: int
    concentration_target: float
    seed: int
    bound_factor: float = 1.0
    intersect_eps: float = 0.5
    max_draws: int = 20000
    rounding_attempts: int = 64
    # per-stage seeds; derived from ``seed`` when left as None
    rounding_seed: int | None = None
    intersect_seed: int | None = None
    adjust_seed: int | None = None

    def __post_init__(self):
        if self.rounding_seed is None:
            self.rounding_seed = _stage_seed(self.seed, 1)
        if self.intersect_seed is None:
            self.intersect_seed = _stage_seed(self.seed, 2)
        if self.adjust_seed is None:
            self.adjust_seed = _stage_seed(self.seed, 3)
        if not 0 < self.concentration_target < 1:
            raise ValidationError("concentration_target must lie in (0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "ImproveParams":
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise ValidationError(f"unknown improve parameters: {sorted(unknown)}")
        if "seed" not in doc:
            raise ValidationError("seed required")
        missing = {"threshold", "eps", "length", "concentration_target"} - set(doc)
        if missing:
            raise ValidationError(f"missing improve parameters: {sorted(missing)}")
        return cls(**doc)


def _run(stage: str, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except Ap3Error as exc:
        if isinstance(exc, StageError):
            raise
        raise StageError(stage, exc) from exc


def smoothing_stages(S: ResidueSet, threshold: float, eps: float, length: int, report: ExperimentReport):
    """split -> Bohr element -> N -> S*N, recorded into ``report``.

    Returns (split, N, w, argmax m)."""
    with report.stage("split_spectrum", {"set": S.to_list(), "threshold": threshold}) as st:
        split = _run("split_spectrum", split_spectrum, S, threshold)
        st.outputs = {"M": split.M, "large_freqs": list(split.large_freqs)}
        st.certificates = {
            "sigma1": split.sigma1,
            "sigma2": split.sigma2,
            "parseval_bound_holds": split.M * threshold**2 <= S.p * S.cardinality,
        }
    with report.stage("bohr_element", {"freqs": list(split.large_freqs), "eps": eps}) as st:
        spec = _run("bohr_element", BohrSpec, S.modulus, split.large_freqs, eps)
        n0 = _run("bohr_element", bohr_element, spec)
        N = _run("bohr_element", SmoothingProgression, S.modulus, n0, length)
        st.outputs = {"n0": n0, "length": length, "pigeonhole_guaranteed": spec.pigeonhole_guaranteed()}
        st.certificates = {
            "flatness": spectrum_flatness(N, split.large_freqs),
            "flatness_bound": 2 * math.pi * length * eps,
        }
    with report.stage("convolve", {"set": S.to_list(), "n0": n0, "length": length}) as st:
        w = convolve(S, N)
        m = int(np.argmax(w.values))
        st.outputs = {"max_convolution": float(w.values[m]), "argmax_m": m}
        st.certificates = {"mass": float(w.values.sum()), "expected_mass": S.cardinality}
    return split, N, w, m


def improve_critical_candidate(S: ResidueSet, params: ImproveParams) -> tuple[ResidueSet, ExperimentReport]:
    """Build a competitor C' with |C'| = |S| out of a set with no dense translate.

    Whether count(C') < count(S) is reported, not promised: the inequality that
    forces it only kicks in for large p.
    """
    if S.cardinality == 0:
        raise ValidationError("S must be nonempty")
    report = ExperimentReport("improve", {"p": S.p, "set": S.to_list(), "params": params.to_dict()})
    base = count_3aps_naive(S)
    with report.stage("count_input", {"set": S.to_list()}) as st:
        st.outputs = {"count": base.to_dict(), "longest_ap": longest_ap(S)}

    split, N, conv, m = smoothing_stages(S, params.threshold, params.eps, params.length, report)
    peak = float(conv.values[m])
    target = params.concentration_target

    if peak > 1 - target:
        with report.stage("extract_ap", {"m": m, "eps": target}) as st:
            run = _run("extract_ap", extract_ap_from_convolution, S, N, m, target)
            st.outputs = {"run": run, "run_elements": run.elements(S.p)}
            st.certificates = {"contained_in_set": run.contained_in(S)}
        flag = "already concentrated" if peak >= 1.0 else "concentrated"
        report.verdict = f"{flag}: (S*N)({m}) = {peak:.6g} > 1 - {target:.6g}; AP of length {run.length} extracted"
        return S, report

    kappa = max(1 - target, peak)
    w = WeightFunction(S.modulus, np.minimum(conv.values / kappa, 1.0))
    with report.stage("round_weights", {"kappa": kappa, "seed": params.rounding_seed}) as st:
        raw, cert = _run(
            "round_weights", round_weights, w, params.rounding_seed, params.bound_factor, params.rounding_attempts
        )
        cert.verify(raw, w)
        S1 = _run("round_weights", adjust_cardinality, raw, w, cert.target, params.rounding_seed)
        st.outputs = {
            "kappa": kappa,
            "weight_total": w.total(),
            "raw_size": raw.cardinality,
            "size": S1.cardinality,
            "count": count_3aps_naive(S1).to_dict(),
        }
        st.certificates = cert.to_dict()

    theta = 1 - kappa
    with report.stage("two_interval", {"p": S.p, "theta": theta}) as st:
        TI = _run("two_interval", two_interval_set, S.modulus, theta)
        st.outputs = {"u_size": TI.U.cardinality, "count_u": TI.count_U}
        st.certificates = {"bound_u": TI.bound_U, "ubar_nontrivial": TI.ubar_nontrivial, "bound_ubar": TI.bound_ubar}

    with report.stage("intersect", {"seed": params.intersect_seed, "eps": params.intersect_eps}) as st:
        sample = _run(
            "intersect", sample_intersection, TI.U, S1, params.intersect_eps, params.max_draws, params.intersect_seed
        )
        st.outputs = {"u": sample.u, "v": sample.v, "size": sample.set.cardinality, "draws": sample.draws}
        st.certificates = {
            "nontrivial_3aps": sample.nontrivial_3aps,
            "count_ceiling": sample.count_ceiling,
            "size_floor": sample.size_floor,
        }

    with report.stage("adjust_cardinality", {"target": S.cardinality, "seed": params.adjust_seed}) as st:
        C1 = _run("adjust_cardinality", adjust_cardinality, sample.set, None, S.cardinality, params.adjust_seed)
        final = count_3aps_naive(C1)
        st.outputs = {"members": C1.to_list(), "count": final.to_dict(), "longest_ap": longest_ap(C1)}
        st.certificates = {"size_matches": C1.cardinality == S.cardinality}

    if C1.cardinality != S.cardinality:
        raise ConsistencyError("C' does not have the cardinality of S")
    better = final.total < base.total
    report.verdict = (
        f"not concentrated: kappa = {kappa:.6g}; count(S) = {base.total}, count(C') = {final.total}; "
        + ("C' has fewer 3APs" if better else "C' is not better at this p")
    )
    return C1, report
