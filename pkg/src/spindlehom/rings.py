"""Exact coefficient rings: the integers, the rationals and prime fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Ring:
    kind: str  # "Z", "Q" or "Fp"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if not (_is_prime(self.p) and self.p <= 2**31):
                raise ValueError(f"{self.p} is not a prime <= 2^31")
        elif self.p != 0:
            raise ValueError("characteristic only applies to prime fields")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip()
        if t in ("Z", "integers"):
            return cls("Z")
        if t in ("Q", "rationals"):
            return cls("Q")
        if t.startswith("Fp:") or t.startswith("F"):
            digits = t[3:] if t.startswith("Fp:") else t[1:]
            return cls("Fp", int(digits))
        raise ValueError(f"cannot parse ring {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p

    def __str__(self):
        return f"Fp:{self.p}" if self.kind == "Fp" else self.kind

    def coerce(self, value):
        """Bring an int, Fraction or 'a/b' string into canonical form."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        if self.kind == "Z":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError(f"{value} is not an integer")
                return int(value.numerator)
            if isinstance(value, bool) or not isinstance(value, int):
                value = int(value)
            return value
        if self.kind == "Q":
            v = Fraction(value)
            return int(v) if v.denominator == 1 else v
        if isinstance(value, Fraction):
            num = value.numerator % self.p
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def is_unit(self, value) -> bool:
        if self.kind == "Z":
            return value in (1, -1)
        return self.coerce(value) != 0

    def inverse(self, value):
        if self.kind == "Z":
            if value not in (1, -1):
                raise ZeroDivisionError(f"{value} is not a unit in Z")
            return value
        if self.kind == "Q":
            return self.coerce(Fraction(1) / Fraction(value))
        return pow(int(value) % self.p, -1, self.p)

    def format(self, value) -> str:
        return str(value)


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("Fp", p)
