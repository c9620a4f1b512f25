"""Randomised rounding of a weight function to a 0/1 set with a certified
per-frequency spectral deviation, and cardinality repair.

RNG: numpy PCG64 through ``np.random.default_rng``. Attempt ``i`` (0-based)
of ``round_weights`` draws from ``default_rng(seed + i)``; ``adjust_cardinality``
draws from ``default_rng(seed)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConsistencyError, RetryExhausted, ValidationError
from .fourier import dft
from .scales import rounding_bound
from .zpz import ResidueSet, WeightFunction

MAX_ATTEMPTS = 64


def hoeffding_bound(r: int, t: float) -> float:
    """4 exp(-r t^2 / 2): tail bound for |sum - mean| > r t, |v_i| < 1 complex."""
    if r < 1 or not t > 0:
        raise ValidationError("need r >= 1 and t > 0")
    return 4.0 * math.exp(-r * t * t / 2.0)


def failure_bound(p: int, bound_factor: float = 1.0) -> float:
    """Union bound over all p frequencies for the rounding deviation event."""
    t = bound_factor * math.log(p) / math.sqrt(p)
    return p * hoeffding_bound(p, t)


def _target(total: float) -> int:
    # ceil, but a sum that is an integer up to rounding stays that integer
    near = round(total)
    return int(near) if abs(total - near) < 1e-9 else math.ceil(total)


@dataclass(frozen=True)
class RoundingCertificate:
    max_spectral_deviation: float
    bound: float
    attempts: int
    seed: int
    delta: float
    target: int

    def verify(self, u: ResidueSet, w: WeightFunction, tol: float = 1e-9) -> None:
        """Recompute max_a |u^(a) - w^(a)| from separate transforms."""
        dev = float(np.abs(dft(u).coeffs - dft(w).coeffs).max())
        if abs(dev - self.max_spectral_deviation) > tol:
            raise ConsistencyError(f"certificate deviation {self.max_spectral_deviation} != recomputed {dev}")
        if not dev < self.bound:
            raise ConsistencyError("certified deviation is not below the bound")

    def to_dict(self) -> dict:
        return asdict(self)


def round_weights(
    w: WeightFunction, seed: int, bound_factor: float = 1.0, max_attempts: int = MAX_ATTEMPTS
) -> tuple[ResidueSet, RoundingCertificate]:
    """Sample u(m) ~ Bernoulli(w(m)) until max_a |u^(a) - w^(a)| < bound_factor log p sqrt p."""
    if not bound_factor > 0:
        raise ValidationError("bound_factor must be positive")
    p = w.p
    bound = rounding_bound(p, bound_factor)
    target = _target(w.total())
    for attempt in range(max_attempts):
        rng = np.random.default_rng(seed + attempt)
        ind = rng.random(p) < w.values
        dev = float(np.abs(dft(ind.astype(np.float64) - w.values).coeffs).max())
        if dev < bound:
            cert = RoundingCertificate(
                max_spectral_deviation=dev,
                bound=bound,
                attempts=attempt + 1,
                seed=int(seed),
                delta=float(target - w.total()) if target != w.total() else 0.0,
                target=target,
            )
            return ResidueSet.from_indicator(w.modulus, ind), cert
    raise RetryExhausted(f"no rounding within {bound:.4g} after {max_attempts} attempts")


def adjustment_cap(p: int) -> int:
    return 4 * math.ceil(math.log(p) * math.sqrt(p))


def adjust_cardinality(S: ResidueSet, w: WeightFunction | None, target: int, seed: int) -> ResidueSet:
    """Flip exactly ||S| - target| uniformly chosen bits so that |result| = target.

    Removals come from S, additions from its complement. Each flip moves every
    Fourier coefficient by at most 1.
    """
    p = S.p
    if w is not None and w.modulus != S.modulus:
        raise ValidationError("modulus mismatch")
    if not 0 <= target <= p:
        raise ValidationError("target cardinality must lie in [0, p]")
    gap = target - S.cardinality
    if abs(gap) > adjustment_cap(p):
        raise ValidationError(f"cardinality gap {gap} exceeds the repair cap {adjustment_cap(p)}")
    if gap == 0:
        return S
    rng = np.random.default_rng(seed)
    ind = S.indicator.copy()
    pool = np.flatnonzero(ind) if gap < 0 else np.flatnonzero(~ind)
    flips = rng.choice(pool, size=abs(gap), replace=False)
    ind[flips] = gap > 0
    return ResidueSet.from_indicator(S.modulus, ind)
