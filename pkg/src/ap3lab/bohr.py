"""Bohr neighbourhoods, the smoothing progression N, S*N, and AP extraction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import NotFound, ValidationError
from .fourier import Spectrum, dft, inverse_dft
from .zpz import ApRun, PrimeModulus, ResidueSet, WeightFunction, as_modulus, exact


@dataclass(frozen=True)
class BohrSpec:
    modulus: PrimeModulus
    freqs: tuple[int, ...]
    eps: float

    def __post_init__(self):
        object.__setattr__(self, "modulus", as_modulus(self.modulus))
        p = self.modulus.p
        freqs = tuple(int(a) for a in self.freqs)
        if any(a < 0 or a >= p for a in freqs):
            raise ValidationError("Bohr frequencies must lie in [0, p-1]")
        if not 0 < self.eps < 0.5:
            raise ValidationError("Bohr radius eps must lie in (0, 1/2)")
        object.__setattr__(self, "freqs", freqs)

    @property
    def k(self) -> int:
        return len(self.freqs)

    def max_distance(self) -> int:
        """Largest integer D with D/p < eps, computed exactly."""
        return math.ceil(exact(self.eps) * self.modulus.p) - 1

    def pigeonhole_guaranteed(self) -> bool:
        """ceil(1/eps)^k < p: boxes of side 1/ceil(1/eps) <= eps force a witness."""
        return math.ceil(Fraction(1) / exact(self.eps)) ** self.k < self.modulus.p


def circle_distance(x: Fraction) -> Fraction:
    """||x||, distance to the nearest integer."""
    frac = x - math.floor(x)
    return min(frac, 1 - frac)


def bohr_element(spec: BohrSpec) -> int:
    """Smallest n in [1, p-1] with ||a n / p|| < eps for every frequency.

    Raises NotFound if the neighbourhood holds no nonzero residue.
    """
    p = spec.modulus.p
    freqs = np.asarray(spec.freqs, dtype=np.int64)
    n = int(kernels.bohr_scan(freqs, p, spec.max_distance()))
    if n < 0:
        raise NotFound(f"no nonzero residue within {spec.eps} of 0 for {spec.k} frequencies mod {p}")
    return n


@dataclass(frozen=True)
class SmoothingProgression:
    modulus: PrimeModulus
    n0: int
    length: int

    def __post_init__(self):
        object.__setattr__(self, "modulus", as_modulus(self.modulus))
        p = self.modulus.p
        if not 1 <= self.length <= p:
            raise ValidationError("progression length must lie in [1, p]")
        if self.n0 % p == 0 and self.length > 1:
            raise ValidationError("n0 must be nonzero mod p")
        object.__setattr__(self, "n0", int(self.n0) % p)

    @property
    def elements(self) -> np.ndarray:
        return (np.arange(self.length, dtype=np.int64) * self.n0) % self.modulus.p

    def scaled_indicator(self) -> np.ndarray:
        v = np.zeros(self.modulus.p)
        v[self.elements] = 1.0 / self.length
        return v

    def translate(self, m: int) -> np.ndarray:
        """m, m - n0, ..., m - (length - 1) n0."""
        return (int(m) - np.arange(self.length, dtype=np.int64) * self.n0) % self.modulus.p


def convolve(S: ResidueSet, N: SmoothingProgression, method: str = "direct") -> WeightFunction:
    """(S*N)(m) = |{n in N : m - n in S}| / |N|."""
    if S.modulus != N.modulus:
        raise ValidationError("modulus mismatch")
    if method == "direct":
        ind = S.indicator.astype(np.int64)
        acc = np.zeros(S.p, dtype=np.int64)
        for shift in N.elements:
            acc += np.roll(ind, int(shift))
        return WeightFunction(S.modulus, acc / N.length)
    if method == "spectral":
        prod = dft(S).coeffs * dft(N.scaled_indicator()).coeffs
        values = np.clip(inverse_dft(Spectrum(S.modulus, prod)), 0.0, 1.0)
        return WeightFunction(S.modulus, values)
    raise ValidationError(f"unknown convolution method {method!r}")


def translate_runs(S: ResidueSet, N: SmoothingProgression, m: int) -> tuple[ApRun, int]:
    """Longest run of the translate m - jN lying in S, and the number of misses."""
    pts = N.translate(m)
    hit = S.indicator[pts]
    best_len, best_j, run = 0, 0, 0
    for j, h in enumerate(hit):
        run = run + 1 if h else 0
        if run > best_len:
            best_len, best_j = run, j
    misses = int(N.length - hit.sum())
    if best_len == 0:
        return ApRun(0, 0, 0), misses
    # j runs best_j - len + 1 .. best_j; written forward from the far end
    start = int(pts[best_j])
    return ApRun(start, N.n0, best_len), misses


def guaranteed_run_length(length: int, eps: float) -> int:
    """Longest run forced by (S*N)(m) > 1 - eps: at most g = ceil(eps |N|) - 1
    misses split |N| - g hits into at most g + 1 runs."""
    g = math.ceil(exact(eps) * length) - 1
    return -(-(length - g) // (g + 1))


def extract_ap_from_convolution(S: ResidueSet, N: SmoothingProgression, m: int, eps: float) -> ApRun:
    """Longest progression with step n0 inside the translate m - N.

    Requires (S*N)(m) > 1 - eps, checked exactly on the integer hit count.
    """
    if not 0 < eps < 1:
        raise ValidationError("eps must lie in (0, 1)")
    run, misses = translate_runs(S, N, m)
    if not Fraction(misses, N.length) < exact(eps):
        raise ValidationError(
            f"(S*N)({m}) = {1 - misses / N.length:.6g} is not above 1 - eps = {1 - eps:.6g}"
        )
    if not run.contained_in(S):
        raise AssertionError("extracted run left S")
    return run


def spectrum_flatness(N: SmoothingProgression, freqs) -> float:
    """max over a in freqs of max(|N^(a) - 1|, |N^(-2a) - 1|), N scaled to mass 1."""
    p = N.modulus.p
    el = N.elements
    worst = 0.0
    for a in freqs:
        for b in (int(a) % p, (-2 * int(a)) % p):
            phase = (b * el) % p
            val = np.exp(2j * np.pi * phase / p).mean()
            worst = max(worst, abs(val - 1.0))
    return float(worst)
