"""Exact and spectral counts of 3-term progressions in Z/pZ.

Counting convention: ordered pairs (n, m) in [0, p)^2 with n, n+m, n+2m all
in S. m = 0 gives the |S| trivial progressions; every nontrivial one is
counted together with its reversal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConsistencyError, ImaginaryResidueError, ValidationError
from .fourier import Spectrum, dft
from .zpz import ResidueSet, complement


@dataclass(frozen=True)
class Ap3Count:
    total: int
    trivial: int
    nontrivial: int

    def __post_init__(self):
        if self.total != self.trivial + self.nontrivial:
            raise ConsistencyError("total != trivial + nontrivial")

    def to_dict(self) -> dict:
        return {"total": self.total, "trivial": self.trivial, "nontrivial": self.nontrivial}


def count_3aps_naive(S: ResidueSet) -> Ap3Count:
    if S.cardinality == 0:
        return Ap3Count(0, 0, 0)
    total = int(kernels.count_3aps_bitset(S.words, S.cyclic_words, S.p))
    return Ap3Count(total, S.cardinality, total - S.cardinality)


def count_3aps(S: ResidueSet) -> int:
    return count_3aps_naive(S).total


def _three_product(spec: Spectrum) -> np.ndarray:
    c = spec.coeffs
    p = spec.p
    neg2 = (-2 * np.arange(p)) % p
    return c * c * c[neg2]


def count_3aps_spectral(S: ResidueSet, method: str = "auto", imag_tol: float = 1e-6) -> float:
    """(1/p) sum_a S^(a)^2 S^(-2a).

    Raises ImaginaryResidueError when the imaginary part exceeds
    ``imag_tol * max(1, |real part|)``.
    """
    value = complex(_three_product(dft(S, method=method)).sum() / S.p)
    if abs(value.imag) > imag_tol * max(1.0, abs(value.real)):
        raise ImaginaryResidueError(f"spectral count has imaginary part {value.imag:.3e}")
    return value.real


@dataclass(frozen=True)
class SpectrumSplit:
    threshold: float
    large_freqs: tuple[int, ...]
    sigma1: complex
    sigma2: complex
    energy: float

    @property
    def M(self) -> int:
        return len(self.large_freqs)

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "large_freqs": list(self.large_freqs),
            "M": self.M,
            "sigma1": [self.sigma1.real, self.sigma1.imag],
            "sigma2": [self.sigma2.real, self.sigma2.imag],
        }


def split_spectrum(S: ResidueSet, threshold: float, method: str = "auto") -> SpectrumSplit:
    """Split sum_a S^(a)^2 S^(-2a) by whether |S^(-2a)| exceeds ``threshold``.

    Sigmas are unnormalised: sigma1 + sigma2 = p * count(S).
    """
    if not threshold > 0:
        raise ValidationError("threshold must be positive")
    spec = dft(S, method=method)
    p = S.p
    neg2 = (-2 * np.arange(p)) % p
    large = np.abs(spec.coeffs[neg2]) > threshold
    terms = _three_product(spec)
    split = SpectrumSplit(
        threshold=float(threshold),
        large_freqs=tuple(int(a) for a in np.flatnonzero(large)),
        sigma1=complex(terms[large].sum()),
        sigma2=complex(terms[~large].sum()),
        energy=spec.energy(),
    )
    # a -> -2a permutes Z/pZ, so each large a owns a distinct |S^(b)|^2 > T^2
    if split.M * threshold**2 > p * S.cardinality * (1 + 1e-9):
        raise ConsistencyError("large-spectrum count violates the Parseval bound")
    return split


def complement_identity_check(S: ResidueSet) -> tuple[int, int]:
    """(count(S), count(S-bar)), after asserting the exact identity
    count(S) = p^2 - 3|S-bar| p + 3|S-bar|^2 - count(S-bar)."""
    Sbar = complement(S)
    c, cbar = count_3aps(S), count_3aps(Sbar)
    p, k = S.p, Sbar.cardinality
    if c != p * p - 3 * k * p + 3 * k * k - cbar:
        raise ConsistencyError(f"inclusion-exclusion identity failed for p={p}")
    return c, cbar
