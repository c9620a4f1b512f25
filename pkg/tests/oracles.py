"""Independent brute-force references. Plain Python only: nothing here may
import the package's counting, transform, or search code."""
from __future__ import annotations

import cmath
from fractions import Fraction
from itertools import combinations


def count_pairs(p: int, members) -> int:
    """#{(r, s) in S^2 : (r + s)/2 in S}, the r + s = 2t form of the count."""
    S = set(int(x) % p for x in members)
    inv2 = (p + 1) // 2
    return sum(1 for r in S for s in S if ((r + s) * inv2) % p in S)


def count_nm(p: int, members) -> int:
    """#{(n, m) : n, n+m, n+2m in S}, straight from the definition."""
    S = set(int(x) % p for x in members)
    return sum(1 for n in S for m in range(p) if (n + m) % p in S and (n + 2 * m) % p in S)


def dft_sum(values) -> list[complex]:
    p = len(values)
    return [sum(values[n] * cmath.exp(2j * cmath.pi * ((a * n) % p) / p) for n in range(p)) for a in range(p)]


def longest_ap_bruteforce(p: int, members) -> int:
    S = set(int(x) % p for x in members)
    if not S:
        return 0
    if len(S) == p:
        return p
    best = 1
    for step in range(1, p):
        for start in S:
            k = 0
            while k < p and (start + k * step) % p in S:
                k += 1
            best = max(best, k)
    return best


def circle_dist(x: Fraction) -> Fraction:
    f = x - (x.numerator // x.denominator)
    return min(f, 1 - f)


def bohr_bruteforce(p: int, freqs, eps) -> int | None:
    e = Fraction(eps)
    for n in range(1, p):
        if all(circle_dist(Fraction(a * n, p)) < e for a in freqs):
            return n
    return None


def critical_bruteforce(p: int, s: int):
    best, found = None, []
    for c in combinations(range(p), s):
        v = count_pairs(p, c)
        if best is None or v < best:
            best, found = v, [c]
        elif v == best:
            found.append(c)
    return best, found
