"""Exact ground fields: the rationals and prime fields F_p.

Elements are plain Python values (``Fraction`` over Q, ``int`` in
``[0, p)`` over F_p) so arithmetic stays cheap; a :class:`Field` only
knows how to normalize, invert and (de)serialize them.
"""

from __future__ import annotations

from fractions import Fraction


class Field:
    """A computable field of characteristic 0 (Q) or p (F_p)."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p < 0 or p == 1:
            raise ValueError(f"invalid characteristic {p}")
        if p and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @classmethod
    def parse(cls, spec: str) -> "Field":
        """``"q"`` or ``"fp:<prime>"``."""
        spec = spec.strip().lower()
        if spec in ("q", "qq", "rational", "rationals"):
            return cls(0)
        if spec.startswith("fp:"):
            return cls(int(spec[3:]))
        raise ValueError(f"unknown field {spec!r}")

    @property
    def spec(self) -> str:
        return "q" if self.p == 0 else f"fp:{self.p}"

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def __call__(self, x):
        """Coerce an int, Fraction or fraction string into the field."""
        if isinstance(x, str):
            return self.from_str(x)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def norm(self, x):
        # results of +,-,* on field elements
        return x if self.p == 0 else x % self.p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / x
        return pow(x, -1, self.p)

    def from_str(self, s: str):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/")
            val = Fraction(int(num), int(den))
        else:
            val = Fraction(int(s))
        return self(val)

    @staticmethod
    def to_str(x) -> str:
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return str(x.numerator)
            return f"{x.numerator}/{x.denominator}"
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


QQ = Field(0)
