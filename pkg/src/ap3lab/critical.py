"""Search for 3AP-minimising ("critical") sets of a given size.

Removing an element never increases the count (each residue carries at least
its own trivial progression), so the minimum over |S| >= s sits at |S| = s and
both searches work at exact cardinality.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._backend import threads
from .apcount import count_3aps_naive
from .errors import ConsistencyError, ValidationError
from .zpz import ApRun, PrimeModulus, ResidueSet, as_modulus, exact, longest_ap, make_residue_set

SEARCH_GUARD = 10**8
MINIMIZER_CAP = 1000


@dataclass
class CriticalSearchResult:
    p: int
    s: int
    min_count: int
    minimizers: list[ResidueSet]
    n_minimizers: int
    longest_aps: list[ApRun]
    method: str
    stats: dict = field(default_factory=dict)

    def verify(self) -> None:
        for S, run in zip(self.minimizers, self.longest_aps):
            if S.cardinality != self.s or count_3aps_naive(S).total != self.min_count:
                raise ConsistencyError(f"reported minimizer {S} does not match size/count")
            if longest_ap(S) != run or not run.contained_in(S):
                raise ConsistencyError(f"longest AP of {S} does not recompute")

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "s": self.s,
            "method": self.method,
            "min_count": self.min_count,
            "min_nontrivial": self.min_count - self.s,
            "n_minimizers": self.n_minimizers,
            "minimizers": [S.to_list() for S in self.minimizers],
            "longest_aps": [r.to_dict() for r in self.longest_aps],
            "stats": self.stats,
        }


def exhaustive_critical(p, s: int, cap: int = MINIMIZER_CAP, n_threads: int | None = None) -> CriticalSearchResult:
    """Exact minimum of the 3AP count over all s-subsets of Z/pZ.

    The search space is split by smallest element; partitions run in order (or
    on ``AP3LAB_THREADS`` threads) and merge into lexicographic order, so the
    result does not depend on the thread count.
    """
    m = as_modulus(p)
    p = m.p
    if not 1 <= s <= p:
        raise ValidationError("need 1 <= s <= p")
    if math.comb(p, s) > SEARCH_GUARD:
        raise ValidationError(
            f"C({p},{s}) = {math.comb(p, s)} subsets exceeds {SEARCH_GUARD}; use anneal_critical"
        )
    # any s-subset's count is a valid starting bound; an interval is the worst
    # case, so use the trivial bound p^2 and let pruning tighten as it goes
    bound = p * p
    firsts = list(range(0, p - s + 1))
    n_threads = threads() if n_threads is None else n_threads
    if n_threads > 1:
        with ThreadPoolExecutor(n_threads) as pool:
            parts = list(pool.map(lambda f: kernels.exhaustive_partition(p, s, f, bound, cap), firsts))
    else:
        parts = []
        for f in firsts:
            part = kernels.exhaustive_partition(p, s, f, bound, cap)
            parts.append(part)
            if part[1]:
                bound = min(bound, int(part[0]))
    best = min(int(b) for b, n, _, _ in parts if n > 0)
    minimizers: list[ResidueSet] = []
    total = 0
    nodes = 0
    for b, n, buf, nd in parts:
        nodes += int(nd)
        if n == 0 or int(b) != best:
            continue
        total += int(n)
        for row in buf[: min(int(n), cap)]:
            if len(minimizers) < cap:
                minimizers.append(make_residue_set(m, row))
    res = CriticalSearchResult(
        p=p,
        s=s,
        min_count=best,
        minimizers=minimizers,
        n_minimizers=total,
        longest_aps=[longest_ap(S) for S in minimizers],
        method="exhaustive",
        stats={"nodes": nodes, "partitions": len(firsts)},
    )
    res.verify()
    return res


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric cooling from t_start to t_end over ``steps`` single-swap moves."""

    steps: int = 20000
    t_start: float = 8.0
    t_end: float = 0.05

    def temperatures(self) -> np.ndarray:
        if self.steps <= 0:
            return np.zeros(0)
        if self.steps == 1:
            return np.array([self.t_start])
        return self.t_start * (self.t_end / self.t_start) ** (np.arange(self.steps) / (self.steps - 1))


def anneal_critical(
    p, s: int, schedule: AnnealSchedule | None = None, seed: int = 0, check_every: int = 1000
) -> CriticalSearchResult:
    """Simulated annealing over s-subsets; energy is the exact 3AP count,
    updated in O(s) per swap. All randomness is drawn up front from
    ``default_rng(seed)`` so the numba and numpy paths walk identical chains."""
    m = as_modulus(p)
    p = m.p
    if not 1 <= s <= p:
        raise ValidationError("need 1 <= s <= p")
    schedule = schedule or AnnealSchedule()
    rng = np.random.default_rng(seed)
    members = np.sort(rng.choice(p, size=s, replace=False)).astype(np.int64)
    temps = schedule.temperatures()
    n = temps.shape[0]
    rem = rng.integers(0, s, size=n).astype(np.int64)
    add = rng.integers(0, max(p - s, 1), size=n).astype(np.int64)
    uni = rng.random(n)
    start_count = count_3aps_naive(make_residue_set(m, members)).total
    energy, best, best_members, accepted, mismatches = kernels.anneal_loop(
        p, members, temps, rem, add, uni, check_every
    )
    if mismatches:
        raise ConsistencyError(f"incremental energy drifted from the recount {mismatches} times")
    S = make_residue_set(m, best_members)
    if count_3aps_naive(S).total != best:
        raise ConsistencyError("best energy does not match a recount")
    res = CriticalSearchResult(
        p=p,
        s=s,
        min_count=int(best),
        minimizers=[S],
        n_minimizers=1,
        longest_aps=[longest_ap(S)],
        method="anneal",
        stats={
            "seed": int(seed),
            "moves": int(n),
            "accepted": int(accepted),
            "initial_count": int(start_count),
            "final_count": int(energy),
            "schedule": {"steps": schedule.steps, "t_start": schedule.t_start, "t_end": schedule.t_end},
        },
    )
    res.verify()
    return res


def size_for_density(p: int, d: float) -> int:
    """ceil(d p), with d read as the decimal it was written as."""
    return max(1, math.ceil(exact(d) * p))


def varnavides_estimate(
    p, d_grid, seed: int = 0, schedule: AnnealSchedule | None = None, guard: int = SEARCH_GUARD
) -> list[dict]:
    """Per density: the minimum 3AP count at s = ceil(d p) and its ratio to p^2.

    ``ratio`` uses the total count (trivial included), so d = 1 gives exactly 1.
    Exhaustive where C(p, s) <= guard, annealing otherwise.
    """
    m = as_modulus(p)
    rows = []
    for d in d_grid:
        if not 0 < d <= 1:
            raise ValidationError("densities must lie in (0, 1]")
        s = size_for_density(m.p, d)
        if math.comb(m.p, s) <= guard:
            res = exhaustive_critical(m, s, cap=1)
        else:
            res = anneal_critical(m, s, schedule, seed)
        rows.append(
            {
                "d": d,
                "s": s,
                "min_count": res.min_count,
                "ratio": res.min_count / m.p**2,
                "min_nontrivial": res.min_count - s,
                "method": res.method,
            }
        )
    return rows
