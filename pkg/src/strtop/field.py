"""Exact ground fields: arbitrary-precision rationals and prime residue fields.

Scalars are plain values (``fractions.Fraction`` over Q, small ``int``
residues over F_p); a ``Field`` object carries the arithmetic.  Nothing in
the package ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction


class FieldMismatchError(TypeError):
    """Scalars or objects over different ground fields were combined."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class RationalField:
    """The field Q.  Scalars are ``Fraction`` (always reduced, positive denominator)."""

    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def is_zero(self, a):
        return a == 0

    def parse(self, text):
        """Parse ``"num/den"`` or ``"num"`` into an exact rational."""
        return Fraction(str(text))

    def format(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "Q"


class PrimeField:
    """The field F_p for a prime 2 <= p < 2**31.  Scalars are ints in [0, p)."""

    def __init__(self, p: int):
        if not (2 <= p < 2**31):
            raise ValueError(f"prime must satisfy 2 <= p < 2^31, got {p}")
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def characteristic(self):
        return self.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def parse(self, text):
        s = str(text)
        if "/" in s:
            num, den = s.split("/")
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(s) % self.p

    def format(self, a):
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F{self.p}"


QQ = RationalField()


def field_from_spec(spec: str):
    """Build a field from a textual spec: ``"Q"`` or ``"Fp:<prime>"``."""
    if spec == "Q":
        return QQ
    if spec.startswith("Fp:"):
        return PrimeField(int(spec[3:]))
    raise ValueError(f"unknown field spec {spec!r} (expected 'Q' or 'Fp:<prime>')")


def field_spec(field) -> str:
    if isinstance(field, RationalField):
        return "Q"
    return f"Fp:{field.p}"


def check_same_field(*fields):
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatchError(f"mixed ground fields {first!r} and {f!r}")
    return first
