"""DFT over Z/pZ with the positive-exponent convention
``F(a) = sum_n f(n) exp(2 pi i a n / p)``.

Two routes: a direct O(p^2) sum (exact index reduction, used as the oracle
and below ``FAST_PATH_THRESHOLD``) and a chirp-z / Bluestein transform that
handles prime lengths through a power-of-two circular convolution.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ValidationError
from .zpz import PrimeModulus, ResidueSet, WeightFunction, as_modulus

FAST_PATH_THRESHOLD = 4096


@dataclass(frozen=True, eq=False)
class Spectrum:
    modulus: PrimeModulus
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.shape != (self.modulus.p,):
            raise ValidationError("spectrum length must equal p")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def p(self) -> int:
        return self.modulus.p

    def __getitem__(self, a: int) -> complex:
        return complex(self.coeffs[int(a) % self.p])

    def energy(self) -> float:
        """sum_a |F(a)|^2, the left side of Parseval."""
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("a,re,im\n")
        for a, z in enumerate(self.coeffs.tolist()):
            buf.write(f"{a},{z.real!r},{z.imag!r}\n")
        return buf.getvalue()


def _values(f) -> tuple[PrimeModulus, np.ndarray]:
    if isinstance(f, ResidueSet):
        return f.modulus, f.indicator.astype(np.float64)
    if isinstance(f, WeightFunction):
        return f.modulus, f.values
    arr = np.asarray(f)
    return as_modulus(arr.shape[0]), arr


def dft_direct(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values)
    p = v.shape[0]
    roots = kernels.roots_of_unity(p)
    if np.iscomplexobj(v):
        re = kernels.dft_direct_kernel(np.ascontiguousarray(v.real, dtype=np.float64), roots)
        im = kernels.dft_direct_kernel(np.ascontiguousarray(v.imag, dtype=np.float64), roots)
        return re + 1j * im
    return kernels.dft_direct_kernel(np.ascontiguousarray(v, dtype=np.float64), roots)


def _chirp(n: int) -> np.ndarray:
    # exp(i pi k^2 / n); reduce k^2 mod 2n first so the angle stays small
    k = np.arange(n, dtype=np.int64)
    return np.exp(1j * np.pi * ((k * k) % (2 * n)) / n)


def dft_bluestein(values: np.ndarray) -> np.ndarray:
    """Chirp-z transform: a n = (a^2 + n^2 - (a - n)^2) / 2 turns the DFT
    into a convolution with conj(chirp), done at power-of-two length."""
    x = np.asarray(values, dtype=np.complex128)
    n = x.shape[0]
    chirp = _chirp(n)
    size = 1 << (2 * n - 1).bit_length()
    a = np.zeros(size, dtype=np.complex128)
    a[:n] = x * chirp
    b = np.zeros(size, dtype=np.complex128)
    b[:n] = np.conj(chirp)
    b[size - n + 1 :] = np.conj(chirp[1:])[::-1]
    conv = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    return chirp * conv[:n]


def dft(f, method: str = "auto", threshold: int | None = None) -> Spectrum:
    """Spectrum of a set, weight function, or raw length-p array.

    ``method`` is "direct", "fast", or "auto" (fast only above the threshold).
    """
    modulus, v = _values(f)
    cut = FAST_PATH_THRESHOLD if threshold is None else threshold
    if method == "auto":
        method = "fast" if modulus.p > cut else "direct"
    if method == "direct":
        return Spectrum(modulus, dft_direct(v))
    if method == "fast":
        return Spectrum(modulus, dft_bluestein(v))
    raise ValidationError(f"unknown dft method {method!r}")


def inverse_dft(F: Spectrum, method: str = "auto") -> np.ndarray:
    """Real array f with dft(f) = F; f(n) = (1/p) sum_a F(a) exp(-2 pi i a n / p)."""
    back = dft(np.conj(F.coeffs), method=method).coeffs
    return (np.conj(back) / F.p).real
