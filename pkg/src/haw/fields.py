"""Exact scalar fields: the rationals, the Gaussian rationals and prime fields.

Rational scalars are ``gmpy2.mpq``; Gaussian rationals are
:class:`GaussianRational` pairs of ``mpq``; prime-field scalars are plain
``int`` residues in ``[0, p)``.  All arithmetic in the library uses the Python
operators followed by :meth:`Field.norm` (a no-op except modulo ``p``), and
division goes through :meth:`Field.inv`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq, is_prime, powmod

_MPQ = type(mpq(0))

# 15 * 2**27 + 1: prime, congruent to 1 mod 4, so it carries a square root of -1
SCREEN_PRIME = 2013265921


class FieldMismatchError(ValueError):
    """Scalars or operands from incompatible fields."""


class GaussianRational:
    """Exact element ``re + i*im`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is _MPQ else mpq(re)
        self.im = im if type(im) is _MPQ else mpq(im)

    @staticmethod
    def _lift(x):
        if type(x) is GaussianRational:
            return x
        if isinstance(x, (int, Fraction)) or type(x) is _MPQ:
            return GaussianRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        return f"({self.re}+{self.im}*i)"


I = GaussianRational(0, 1)


def parse_rational(text) -> mpq:
    """Parse ``"a/b"``, ``"a"`` or an int into an ``mpq``."""
    if isinstance(text, int) or type(text) is _MPQ:
        return mpq(text)
    if isinstance(text, Fraction):
        return mpq(text.numerator, text.denominator)
    if not isinstance(text, str):
        raise ValueError(f"not a rational literal: {text!r}")
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            den_i = int(den)
            if den_i == 0:
                raise ValueError("zero denominator")
            return mpq(int(num), den_i)
        return mpq(int(s))
    except ValueError as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(x) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Field:
    """Descriptor of an exact field: ``kind`` is ``"Q"``, ``"Qi"`` or ``"Fp"``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "Qi", "Fp"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or self.p < 2 or not is_prime(self.p):
                raise ValueError(f"prime field needs a prime modulus, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("modulus given for a characteristic-zero field")

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Fp" else 0

    @property
    def modulus(self) -> int:
        """``p`` for prime fields, ``0`` otherwise (handy as a hot-loop flag)."""
        return self.p if self.kind == "Fp" else 0

    def __str__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    @property
    def zero(self):
        if self.kind == "Q":
            return mpq(0)
        if self.kind == "Qi":
            return GaussianRational(0, 0)
        return 0

    @property
    def one(self):
        if self.kind == "Q":
            return mpq(1)
        if self.kind == "Qi":
            return GaussianRational(1, 0)
        return 1

    def norm(self, x):
        """Bring the result of operator arithmetic back to canonical form."""
        if self.kind == "Fp":
            return x % self.p
        return x

    def inv(self, x):
        if self.kind == "Fp":
            x %= self.p
            if not x:
                raise ZeroDivisionError("inverse of zero")
            return powmod(x, -1, self.p).__int__()
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "Q":
            return 1 / mpq(x)
        return x.inverse()

    def sqrt_minus_one(self):
        """A square root of -1 in this field (raises if there is none)."""
        if self.kind == "Qi":
            return I
        if self.kind == "Fp" and self.p % 4 == 1:
            # a non-residue raised to (p-1)/4
            for g in range(2, self.p):
                r = int(powmod(g, (self.p - 1) // 4, self.p))
                if r * r % self.p == self.p - 1:
                    return r
        raise FieldMismatchError(f"{self} has no square root of -1")

    def coerce(self, x):
        """Convert ``x`` into this field's canonical scalar type.

        Integers and rationals embed everywhere (modulo ``p`` when invertible);
        a Gaussian rational with nonzero imaginary part only lands in ``Qi`` or
        in ``Fp`` with ``p = 1 mod 4``.
        """
        if self.kind == "Q":
            if type(x) is _MPQ:
                return x
            if isinstance(x, (int, Fraction)):
                return mpq(x)
            if type(x) is GaussianRational and not x.im:
                return x.re
            raise FieldMismatchError(f"cannot coerce {x!r} into Q")
        if self.kind == "Qi":
            if type(x) is GaussianRational:
                return x
            if isinstance(x, (int, Fraction)) or type(x) is _MPQ:
                return GaussianRational(x, 0)
            raise FieldMismatchError(f"cannot coerce {x!r} into Qi")
        p = self.p
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x % p
        if type(x) is _MPQ or isinstance(x, Fraction):
            den = int(x.denominator)
            if den % p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
            return int(x.numerator) * pow(den, -1, p) % p
        if type(x) is GaussianRational:
            re = self.coerce(x.re)
            if not x.im:
                return re
            return (re + self.sqrt_minus_one() * self.coerce(x.im)) % p
        raise FieldMismatchError(f"cannot coerce {x!r} into {self}")

    def parse(self, re, im=None):
        """Scalar from the string pair used by the form file format."""
        r = parse_rational(re) if re is not None else mpq(0)
        if im is None:
            return self.coerce(r)
        i_part = parse_rational(im)
        if self.kind == "Q" and i_part:
            raise FieldMismatchError("imaginary part given for a rational field")
        return self.coerce(GaussianRational(r, i_part))

    def format(self, x) -> tuple[str, str | None]:
        """``(re, im)`` strings; ``im`` is ``None`` outside ``Qi``."""
        if self.kind == "Qi":
            return format_rational(x.re), format_rational(x.im)
        if self.kind == "Q":
            return format_rational(x), None
        return str(int(x) % self.p), None

    def contains(self, x) -> bool:
        if self.kind == "Q":
            return type(x) is _MPQ
        if self.kind == "Qi":
            return type(x) is GaussianRational
        return isinstance(x, int) and 0 <= x < self.p


Q = Field("Q")
QI = Field("Qi")


def prime_field(p: int) -> Field:
    return Field("Fp", p)


def screening_field(field: Field) -> Field:
    """The fixed prime field used to screen computations over ``field``."""
    if field.kind == "Fp":
        return field
    return Field("Fp", SCREEN_PRIME)
