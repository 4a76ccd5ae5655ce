"""Exact scalar and polynomial arithmetic.

Every exact quantity in this package is either a rational number or a dense
univariate polynomial in the cluster fugacity Q with rational coefficients.
Rationals are plain ``fractions.Fraction`` values (arbitrary precision,
always reduced, positive denominator), re-exported here as ``Rat``.

Complex floating point shows up only in the numeric spectral path and is
confined to the ``ComplexF`` alias; nothing in the exact path ever touches
a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction
ComplexF = complex

RatLike = Union[Fraction, int, str]


def as_rat(value: RatLike) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact rational.

    Floats are rejected on purpose: a float argument is almost always an
    accident that would silently poison an exact computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise ValueError(f"not an exact rational: {value!r}")


def rat_str(value: Fraction) -> str:
    """Serialize a rational as "num/den" (denominator always present)."""
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class PolyQ:
    """Dense polynomial in Q over the rationals.

    ``coeffs[k]`` multiplies Q**k.  Trailing zeros are trimmed on
    construction, so the zero polynomial has an empty coefficient tuple and
    every other polynomial has a nonzero leading coefficient.  Instances
    are immutable and hashable.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        cs = [as_rat(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors ------------------------------------------------------

    @staticmethod
    def of(coeffs: Iterable[RatLike]) -> "PolyQ":
        return PolyQ(tuple(as_rat(c) for c in coeffs))

    @staticmethod
    def zero() -> "PolyQ":
        return PolyQ(())

    @staticmethod
    def one() -> "PolyQ":
        return PolyQ((Fraction(1),))

    @staticmethod
    def constant(c: RatLike) -> "PolyQ":
        return PolyQ((as_rat(c),))

    @staticmethod
    def q() -> "PolyQ":
        """The polynomial Q itself."""
        return PolyQ((Fraction(0), Fraction(1)))

    @staticmethod
    def monomial(c: RatLike, power: int) -> "PolyQ":
        if power < 0:
            raise ValueError("negative power")
        return PolyQ((Fraction(0),) * power + (as_rat(c),))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the convention degree(0) == -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    def term(self, power: int) -> "PolyQ":
        """The degree-``power`` monomial part of this polynomial."""
        return PolyQ.monomial(self.coeff(power), power)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "PolyQ | RatLike") -> "PolyQ":
        o = _as_poly(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return PolyQ(tuple(self.coeff(k) + o.coeff(k) for k in range(n)))

    __radd__ = __add__

    def __sub__(self, other: "PolyQ | RatLike") -> "PolyQ":
        o = _as_poly(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return PolyQ(tuple(self.coeff(k) - o.coeff(k) for k in range(n)))

    def __rsub__(self, other: "PolyQ | RatLike") -> "PolyQ":
        return _as_poly(other) - self

    def __neg__(self) -> "PolyQ":
        return PolyQ(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "PolyQ | RatLike") -> "PolyQ":
        o = _as_poly(other)
        if self.is_zero() or o.is_zero():
            return PolyQ.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return PolyQ(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PolyQ":
        if n < 0:
            raise ValueError("negative power")
        out = PolyQ.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: RatLike) -> "PolyQ":
        return self * as_rat(c)

    # -- evaluation --------------------------------------------------------

    def eval(self, q: RatLike) -> Fraction:
        """Exact Horner evaluation at a rational point."""
        x = as_rat(q)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, q: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * q + float(c)
        return acc

    def shift_down(self, power: int) -> "PolyQ":
        """Exact division by Q**power; the low coefficients must vanish."""
        if any(c != 0 for c in self.coeffs[:power]):
            raise ValueError(f"polynomial not divisible by Q^{power}")
        return PolyQ(self.coeffs[power:])

    # -- serialization -----------------------------------------------------

    def to_json(self) -> list[str]:
        """JSON form: list of "num/den" strings, index = power of Q."""
        return [rat_str(c) for c in self.coeffs]

    @staticmethod
    def from_json(data: Sequence[str]) -> "PolyQ":
        return PolyQ.of(data)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coeff(k)
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "Q" if k == 1 else f"Q^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"PolyQ({self})"


def _as_poly(value: "PolyQ | RatLike") -> PolyQ:
    if isinstance(value, PolyQ):
        return value
    return PolyQ.constant(as_rat(value))
