"""Exact scalar fields and the deterministic random streams built on them.

Two fields are supported: the rationals (elements are ``fractions.Fraction``)
and a prime field F_p (elements are plain ints in ``range(p)``).  Code that is
generic over the field writes ordinary Python arithmetic and passes the result
through :meth:`Field.reduce`; division always goes through :meth:`Field.div`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DivisionByNonUnit

DEFAULT_PRIME = 2147483647
DEFAULT_SEED = 42
MIN_PRIME = 1 << 20
# Rational random draws stay small so exact arithmetic stays fast.
RATIONAL_SAMPLE_BOUND = 1000


class Field:
    kind: str = ""
    zero = 0
    one = 1

    def reduce(self, x):
        raise NotImplementedError

    def coerce(self, value):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def div(self, a, b):
        return self.reduce(a * self.inv(b))

    def neg(self, x):
        return self.reduce(-x)

    def is_zero(self, x) -> bool:
        return x == 0

    def random(self, rng: random.Random):
        raise NotImplementedError

    def random_nonzero(self, rng: random.Random):
        while True:
            x = self.random(rng)
            if x != 0:
                return x

    def random_p1_point(self, rng: random.Random) -> tuple:
        """Uniform draw from the sampled affine line plus the point at infinity."""
        raise NotImplementedError

    def to_str(self, x) -> str:
        return str(x)


class RationalField(Field):
    kind = "q"
    zero = Fraction(0)
    one = Fraction(1)

    def reduce(self, x):
        return x if isinstance(x, Fraction) else Fraction(x)

    def coerce(self, value):
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value)

    def inv(self, x):
        if x == 0:
            raise DivisionByNonUnit("division by zero in Q")
        return 1 / Fraction(x)

    def random(self, rng):
        return Fraction(rng.randint(-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND))

    def random_p1_point(self, rng):
        k = rng.randint(-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND + 1)
        if k > RATIONAL_SAMPLE_BOUND:
            return (self.zero, self.one)
        return (self.one, Fraction(k))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "RationalField()"


class PrimeField(Field):
    kind = "fp"

    def __init__(self, p: int):
        self.p = p

    def reduce(self, x):
        return x % self.p

    def coerce(self, value):
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DivisionByNonUnit(f"{value} has no image in F_{self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise DivisionByNonUnit(f"division by zero in F_{self.p}")
        return pow(x, -1, self.p)

    def random(self, rng):
        return rng.randrange(self.p)

    def random_p1_point(self, rng):
        k = rng.randrange(self.p + 1)
        return (0, 1) if k == self.p else (1, k)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


QQ = RationalField()


def is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


@dataclass(frozen=True)
class FieldConfig:
    """Which field to compute over, and the master seed for random draws."""

    kind: str = "fp"
    prime: int = DEFAULT_PRIME
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.kind not in ("q", "fp"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.kind == "fp" and (self.prime < MIN_PRIME or not is_prime(self.prime)):
            raise ValueError(f"prime must be a prime >= 2^20, got {self.prime}")

    def field(self) -> Field:
        return QQ if self.kind == "q" else PrimeField(self.prime)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "seed": self.seed}
        if self.kind == "fp":
            d["prime"] = self.prime
        return d


def stream(seed: int, *key) -> random.Random:
    """Independent generator for the task named by ``key`` under ``seed``.

    Streams are derived by hashing, so trial ``i`` sees the same draws no
    matter which other trials run, or in which order.
    """
    label = "/".join([str(seed), *map(str, key)])
    return random.Random(label)
