"""Residue arithmetic and the core set / weight types on Z/pZ."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from . import kernels
from .errors import ValidationError


def exact(x) -> Fraction:
    """A real parameter as the decimal it was written as: 0.2 -> 1/5, not the
    binary float just above it."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        p = self.p
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
            raise ValidationError(f"modulus must be an integer, got {p!r}")
        object.__setattr__(self, "p", int(p))
        if self.p < 5 or not is_prime(self.p):
            raise ValidationError(f"modulus must be a prime >= 5, got {p}")

    def __int__(self):
        return self.p

    def inverse(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return pow(a, -1, self.p)


ModulusLike = Union[PrimeModulus, int]


def as_modulus(p: ModulusLike) -> PrimeModulus:
    return p if isinstance(p, PrimeModulus) else PrimeModulus(p)


class ResidueSet:
    """Immutable subset of Z/pZ stored as packed uint64 words."""

    def __init__(self, modulus: ModulusLike, words: np.ndarray):
        self.modulus = as_modulus(modulus)
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (-(-self.modulus.p // 64),):
            raise ValidationError("word array has the wrong length for p")
        tail = self.modulus.p % 64
        if tail and words[-1] >> np.uint64(tail):
            raise ValidationError("bits set beyond p - 1")
        words.setflags(write=False)
        self.words = words
        self.cardinality = int(np.bitwise_count(words).sum())

    @classmethod
    def from_indicator(cls, modulus: ModulusLike, indicator) -> "ResidueSet":
        m = as_modulus(modulus)
        ind = np.asarray(indicator, dtype=bool)
        if ind.shape != (m.p,):
            raise ValidationError(f"indicator must have length {m.p}")
        return cls(m, kernels.pack_bits(ind)[: -(-m.p // 64)])

    @property
    def p(self) -> int:
        return self.modulus.p

    @cached_property
    def indicator(self) -> np.ndarray:
        ind = kernels.unpack_bits(self.words, self.p)
        ind.setflags(write=False)
        return ind

    @cached_property
    def members(self) -> np.ndarray:
        m = np.flatnonzero(self.indicator)
        m.setflags(write=False)
        return m

    @cached_property
    def cyclic_words(self) -> np.ndarray:
        return kernels.cyclic_words(self.indicator)

    def __len__(self):
        return self.cardinality

    def __contains__(self, r) -> bool:
        return bool(self.indicator[int(r) % self.p])

    def __iter__(self):
        return (int(x) for x in self.members)

    def __eq__(self, other):
        if not isinstance(other, ResidueSet):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.p, self.words.tobytes()))

    def __repr__(self):
        shown = self.members[:12].tolist()
        more = ", ..." if self.cardinality > 12 else ""
        return f"ResidueSet(p={self.p}, {{{', '.join(map(str, shown))}{more}}})"

    def to_list(self) -> list[int]:
        return [int(x) for x in self.members]


def make_residue_set(p: ModulusLike, members: Iterable[int]) -> ResidueSet:
    m = as_modulus(p)
    ind = np.zeros(m.p, dtype=bool)
    idx = np.asarray(list(members), dtype=np.int64)
    if idx.size:
        ind[idx % m.p] = True
    return ResidueSet.from_indicator(m, ind)


def full_set(p: ModulusLike) -> ResidueSet:
    m = as_modulus(p)
    return ResidueSet.from_indicator(m, np.ones(m.p, dtype=bool))


def complement(S: ResidueSet) -> ResidueSet:
    return ResidueSet.from_indicator(S.modulus, ~S.indicator)


def random_set(p: ModulusLike, size: int, rng: np.random.Generator) -> ResidueSet:
    m = as_modulus(p)
    return make_residue_set(m, rng.choice(m.p, size=size, replace=False))


def affine_map(S: ResidueSet, a: int, b: int) -> ResidueSet:
    """The image {a s + b}; a must be a unit."""
    if a % S.p == 0:
        raise ValidationError("affine multiplier must be nonzero mod p")
    return make_residue_set(S.modulus, (a * S.members + b) % S.p)


class WeightFunction:
    """Real weights w(m) in [0, 1] on the residues."""

    __slots__ = ("modulus", "values")

    def __init__(self, modulus: ModulusLike, values):
        self.modulus = as_modulus(modulus)
        v = np.array(values, dtype=np.float64)
        if v.shape != (self.modulus.p,):
            raise ValidationError(f"weights must have length {self.modulus.p}")
        if not np.all(np.isfinite(v)) or v.min(initial=0.0) < 0.0 or v.max(initial=0.0) > 1.0:
            raise ValidationError("weights must lie in [0, 1]")
        v.setflags(write=False)
        self.values = v

    @property
    def p(self) -> int:
        return self.modulus.p

    def total(self) -> float:
        return float(self.values.sum())

    def __repr__(self):
        return f"WeightFunction(p={self.p}, total={self.total():.6g})"


@dataclass(frozen=True)
class ApTriple:
    n: int
    m: int
    p: int

    @property
    def members(self) -> tuple[int, int, int]:
        return (self.n % self.p, (self.n + self.m) % self.p, (self.n + 2 * self.m) % self.p)

    @property
    def trivial(self) -> bool:
        return self.m % self.p == 0


@dataclass(frozen=True)
class ApRun:
    start: int
    step: int
    length: int

    def elements(self, p: int) -> list[int]:
        return [(self.start + j * self.step) % p for j in range(self.length)]

    def contained_in(self, S: ResidueSet) -> bool:
        return all(x in S for x in self.elements(S.p))

    def to_dict(self) -> dict:
        return {"start": self.start, "step": self.step, "length": self.length}


EMPTY_RUN = ApRun(0, 0, 0)


def longest_ap(S: ResidueSet) -> ApRun:
    """Longest progression inside S.

    Steps 1..(p-1)/2 are scanned (step s backwards is step p-s). Ties go to
    the smallest step, then the smallest start. The empty set gives the
    sentinel run (0, 0, 0).
    """
    p = S.p
    if S.cardinality == 0:
        return EMPTY_RUN
    if S.cardinality == p:
        return ApRun(0, 1, p)
    start, step, length = kernels.longest_ap_scan(np.ascontiguousarray(S.indicator, dtype=np.bool_), p)
    return ApRun(int(start), int(step), int(length))


# ---------------------------------------------------------------------------
# file formats

def dump_set_json(S: ResidueSet) -> str:
    return json.dumps({"p": S.p, "members": S.to_list()})


def dump_set_text(S: ResidueSet) -> str:
    return "".join([f"p={S.p}\n"] + [f"{x}\n" for x in S])


def parse_set(text: str) -> ResidueSet:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
            return make_residue_set(int(doc["p"]), [int(x) for x in doc["members"]])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"bad set JSON: {exc}") from exc
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("p="):
        raise ValidationError("text set file must start with a 'p=<int>' header")
    try:
        p = int(lines[0][2:])
        members = [int(ln) for ln in lines[1:]]
    except ValueError as exc:
        raise ValidationError(f"bad set text: {exc}") from exc
    return make_residue_set(p, members)


def load_set(path) -> ResidueSet:
    return parse_set(Path(path).read_text())


def save_set(S: ResidueSet, path, fmt: str = "json") -> None:
    Path(path).write_text(dump_set_json(S) + "\n" if fmt == "json" else dump_set_text(S))


def load_weights(path) -> WeightFunction:
    try:
        doc = json.loads(Path(path).read_text())
        return WeightFunction(int(doc["p"]), doc["values"])
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"bad weights file: {exc}") from exc


def dump_weights(w: WeightFunction) -> str:
    return json.dumps({"p": w.p, "values": w.values.tolist()})
