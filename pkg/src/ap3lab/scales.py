"""The asymptotic parameter choices, evaluated at a concrete p.

At desk-scale p these are mostly useless (thresholds exceed |S|, Bohr radii
collapse), which is why every pipeline stage takes explicit values instead.
``base`` selects the logarithm; natural log by default.
"""
from __future__ import annotations

import math


def _log(x: float, base: float) -> float:
    return math.log(x) / math.log(base) if base != math.e else math.log(x)


def large_spectrum_threshold(p: int, base: float = math.e) -> float:
    """p * loglog p / sqrt(log p)."""
    lg = _log(p, base)
    return p * _log(lg, base) / math.sqrt(lg)


def large_spectrum_count_bound(p: int, density: float, base: float = math.e) -> float:
    """Parseval cap on the number of large frequencies: d log p / (loglog p)^2."""
    lg = _log(p, base)
    return density * lg / _log(lg, base) ** 2


def bohr_parameters(p: int, L: float, base: float = math.e) -> tuple[float, int]:
    """(eps, length) for K = 2L: eps = 1/log^{2L} p, |N| = ceil(log^L p)."""
    lg = _log(p, base)
    return 1.0 / lg ** (2 * L), math.ceil(lg**L)


def bohr_frequency_budget(p: int, K: float, base: float = math.e) -> float:
    """Frequency budget for the pigeonhole step: log p / (2 K loglog p)."""
    lg = _log(p, base)
    return lg / (2 * K * _log(lg, base))


def concentration_target(p: int, base: float = math.e) -> float:
    """loglog p / log^{1/4} p: how far below 1 the smoothed density may sit."""
    lg = _log(p, base)
    return _log(lg, base) / lg**0.25


def rounding_bound(p: int, factor: float = 1.0, base: float = math.e) -> float:
    """factor * log p * sqrt p."""
    return factor * _log(p, base) * math.sqrt(p)
