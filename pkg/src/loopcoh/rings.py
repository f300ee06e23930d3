"""Exact coefficient arithmetic: integers, rationals, prime fields.

Elements are plain Python ints (Z and F_p, the latter stored in [0, p))
or Fractions (Q).  All arithmetic goes through the RingSpec so callers
never touch floating point.
"""
from __future__ import annotations

from fractions import Fraction


class RingError(Exception):
    """Wrong ring for an operation, or an invalid ring description."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class RingSpec:
    """One of Z, Q, or F_p with p prime."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind not in ("integers", "rationals", "prime_field"):
            raise RingError(f"unknown ring kind {kind!r}")
        if kind == "prime_field":
            if p is None or not is_prime(p):
                raise RingError(f"prime_field needs a prime, got {p!r}")
        elif p is not None:
            raise RingError(f"{kind} takes no modulus")
        self.kind = kind
        self.p = p

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls("integers")

    @classmethod
    def rationals(cls) -> "RingSpec":
        return cls("rationals")

    @classmethod
    def prime_field(cls, p: int) -> "RingSpec":
        return cls("prime_field", p)

    @property
    def is_field(self) -> bool:
        return self.kind != "integers"

    @property
    def char(self) -> int:
        return self.p if self.kind == "prime_field" else 0

    @property
    def has_two_torsion(self) -> bool:
        return self.kind == "prime_field" and self.p == 2

    def zero(self):
        return Fraction(0) if self.kind == "rationals" else 0

    def one(self):
        return Fraction(1) if self.kind == "rationals" else 1

    def normalize(self, x):
        if self.kind == "integers":
            return int(x)
        if self.kind == "rationals":
            return Fraction(x)
        return int(x) % self.p

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        return self.normalize(a - b)

    def mul(self, a, b):
        return self.normalize(a * b)

    def neg(self, a):
        return self.normalize(-a)

    def inv(self, a):
        if self.kind == "integers":
            if a in (1, -1):
                return a
            raise RingError(f"{a} is not a unit in Z")
        if self.kind == "rationals":
            if a == 0:
                raise RingError("division by zero")
            return 1 / Fraction(a)
        a = a % self.p
        if a == 0:
            raise RingError("division by zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return self.normalize(a) == 0

    def __eq__(self, other):
        return (
            isinstance(other, RingSpec)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        if self.kind == "prime_field":
            return f"RingSpec(prime_field({self.p}))"
        return f"RingSpec({self.kind})"

    def describe(self) -> str:
        return {"integers": "Z", "rationals": "Q"}.get(self.kind, f"F{self.p}")


def ring_from_name(name: str) -> RingSpec:
    """Parse ring names used in config files: Z, Q, F2, F3, ..."""
    name = name.strip()
    if name in ("Z", "integers"):
        return RingSpec.integers()
    if name in ("Q", "rationals"):
        return RingSpec.rationals()
    if name.startswith("F") and name[1:].isdigit():
        return RingSpec.prime_field(int(name[1:]))
    raise RingError(f"cannot parse ring name {name!r}")
