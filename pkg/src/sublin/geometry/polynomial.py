"""Bivariate polynomials with rational coefficients, evaluated exactly."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping

import numpy as np

from ..errors import ConfigurationError

MAX_DEGREE = 8
MAX_HEIGHT = 2**64

_TOKEN = re.compile(r"^(x1|x2)(?:\^(\d+))?$")


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ConfigurationError("polynomial coefficients must be exact; got a float")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"bad coefficient {value!r}") from exc


def parse_monomial(key: str) -> tuple[int, int]:
    """Parse ``"x1^2 x2^0"`` (or ``"x1*x2"``, ``"1"``) into an exponent pair."""
    a = b = 0
    for tok in re.split(r"[\s*]+", key.strip()):
        if tok in ("", "1"):
            continue
        m = _TOKEN.match(tok)
        if m is None:
            raise ConfigurationError(f"bad monomial {key!r}")
        e = int(m.group(2) or 1)
        if m.group(1) == "x1":
            a += e
        else:
            b += e
    return a, b


@dataclass(frozen=True)
class Polynomial:
    """p(x1, x2) = sum c_ab x1^a x2^b, stored as a sorted tuple of nonzero terms."""

    terms: tuple[tuple[tuple[int, int], Fraction], ...] = ()

    def __post_init__(self):
        for (a, b), c in self.terms:
            if a + b > MAX_DEGREE:
                raise ConfigurationError(f"degree {a + b} exceeds the cap {MAX_DEGREE}")
            if abs(c.numerator) > MAX_HEIGHT or c.denominator > MAX_HEIGHT:
                raise ConfigurationError(f"coefficient {c} exceeds the height cap 2^64")

    @classmethod
    def from_terms(cls, mapping: Mapping) -> Polynomial:
        acc: dict[tuple[int, int], Fraction] = {}
        for key, value in mapping.items():
            mono = parse_monomial(key) if isinstance(key, str) else tuple(key)
            if len(mono) != 2 or min(mono) < 0:
                raise ConfigurationError(f"bad monomial {key!r}")
            acc[mono] = acc.get(mono, Fraction(0)) + _as_fraction(value)
        return cls(tuple(sorted((m, c) for m, c in acc.items() if c != 0)))

    @classmethod
    def const(cls, c) -> Polynomial:
        return cls.from_terms({(0, 0): c})

    @classmethod
    def x1(cls) -> Polynomial:
        return cls.from_terms({(1, 0): 1})

    @classmethod
    def x2(cls) -> Polynomial:
        return cls.from_terms({(0, 1): 1})

    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((a + b for (a, b), _ in self.terms), default=0)

    def to_json(self) -> dict[str, str]:
        return {f"x1^{a} x2^{b}": str(c) for (a, b), c in self.terms}

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        return other if isinstance(other, Polynomial) else Polynomial.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = self.as_dict()
        for m, c in other.terms:
            acc[m] = acc.get(m, Fraction(0)) + c
        return Polynomial.from_terms(acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        acc: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self.terms:
            for (a2, b2), c2 in other.terms:
                m = (a1 + a2, b1 + b2)
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return Polynomial.from_terms(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.const(1)
        for _ in range(k):
            out = out * self
        return out

    # evaluation -------------------------------------------------------
    def __call__(self, x1, x2) -> Fraction:
        x1, x2 = Fraction(x1), Fraction(x2)
        return sum((c * x1**a * x2**b for (a, b), c in self.terms), Fraction(0))

    def evaluate_float(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        out = np.zeros(np.broadcast(x1, x2).shape)
        for (a, b), c in self.terms:
            out = out + float(c) * x1**a * x2**b
        return out

    def sign_on_lattice(self, xs: list[Fraction], ys: list[Fraction]) -> np.ndarray:
        """Exact sign of p at every (xs[i], ys[j]); result has shape (len(ys), len(xs))."""
        if not self.terms:
            return np.zeros((len(ys), len(xs)), dtype=np.int8)
        q1 = lcm(*(x.denominator for x in xs))
        q2 = lcm(*(y.denominator for y in ys))
        qc = lcm(*(c.denominator for _, c in self.terms))
        d1 = max(a for (a, _), _ in self.terms)
        d2 = max(b for (_, b), _ in self.terms)
        px = [int(x * q1) for x in xs]
        py = [int(y * q2) for y in ys]
        by_b: dict[int, list[tuple[int, int]]] = {}
        for (a, b), c in self.terms:
            by_b.setdefault(b, []).append((a, int(c * qc)))
        # p * q1^d1 * q2^d2 * qc = sum_b row_b[j] * col_b[i], all integers
        factors = []
        for b, entries in by_b.items():
            col = [sum(c * p**a * q1 ** (d1 - a) for a, c in entries) for p in px]
            row = [p**b * q2 ** (d2 - b) for p in py]
            factors.append((row, col))
        bound = sum(max(map(abs, r)) * max(map(abs, c)) for r, c in factors)
        dtype = np.int64 if bound < 2**62 else object
        total = np.zeros((len(ys), len(xs)), dtype=dtype)
        for row, col in factors:
            total = total + np.outer(np.array(row, dtype=dtype), np.array(col, dtype=dtype))
        return np.sign(total).astype(np.int8)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self.terms:
            mono = " ".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("x1", a), ("x2", b)) if e
            )
            parts.append(f"{c}" + (f" {mono}" if mono else ""))
        return " + ".join(parts)


X1 = Polynomial.x1()
X2 = Polynomial.x2()
