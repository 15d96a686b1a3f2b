# capcalc/schemas/classes.py
from fractions import Fraction
from typing import Any, Tuple, Union

from pydantic import BaseModel, ValidationError, field_validator

from capcalc.core.exceptions import DegreeMismatchError, InvalidInputError

Rational = Union[int, str, Fraction]


# ==============================================
# CODEC RATIONNELS
# ==============================================

def to_fraction(value: Any) -> Fraction:
    """Convert int, Fraction or 'p/q' text to an exact Fraction."""
    if isinstance(value, bool):
        raise InvalidInputError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise InvalidInputError("empty rational")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InvalidInputError(f"not a rational: {value!r}")
    raise InvalidInputError(f"not a rational: {value!r}")


def format_fraction(value: Fraction) -> str:
    """Lowest-terms 'p/q', or plain 'p' for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _to_int(value: Any) -> int:
    if isinstance(value, bool):
        raise InvalidInputError(f"not an integer: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            raise InvalidInputError(f"not an integer: {value!r}")
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    raise InvalidInputError(f"not an integer: {value!r}")


def _split_vector(text: str) -> Tuple[str, Tuple[str, ...]]:
    if not isinstance(text, str):
        raise InvalidInputError(f"expected text, got {type(text).__name__}")
    head, sep, tail = text.strip().partition(";")
    if ";" in tail:
        raise InvalidInputError(f"too many ';' in {text!r}")
    items = tuple(item.strip() for item in tail.split(",")) if tail.strip() else ()
    if any(not item for item in items):
        raise InvalidInputError(f"empty coordinate in {text!r}")
    return head, items


# ==============================================
# HOMOLOGY
# ==============================================

class HomologyClass(BaseModel):
    """Class aH - sum b_i E_i in H_2 of CP^2 # n(-CP^2)."""
    a: int
    b: Tuple[int, ...] = ()

    class Config:
        frozen = True

    @property
    def n(self) -> int:
        return len(self.b)

    @classmethod
    def of(cls, a: int, *b: int) -> "HomologyClass":
        return cls(a=a, b=tuple(b))

    @classmethod
    def zero(cls, n: int) -> "HomologyClass":
        return cls(a=0, b=(0,) * n)

    @classmethod
    def line(cls, n: int) -> "HomologyClass":
        return cls(a=1, b=(0,) * n)

    @classmethod
    def exceptional(cls, i: int, n: int) -> "HomologyClass":
        """E_i, 1-based, stored with the sign factored out (b_i = -1)."""
        if not 1 <= i <= n:
            raise InvalidInputError(f"exceptional index {i} out of range 1..{n}")
        return cls(a=0, b=tuple(-1 if j == i else 0 for j in range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "HomologyClass":
        head, items = _split_vector(text)
        try:
            return cls(a=_to_int(head), b=tuple(_to_int(item) for item in items))
        except ValidationError as e:
            raise InvalidInputError(f"invalid class {text!r}: {e}")

    def _check(self, other: "HomologyClass") -> None:
        if self.n != other.n:
            raise DegreeMismatchError(self.n, other.n)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        self._check(other)
        return HomologyClass(a=self.a + other.a, b=tuple(x + y for x, y in zip(self.b, other.b)))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        self._check(other)
        return HomologyClass(a=self.a - other.a, b=tuple(x - y for x, y in zip(self.b, other.b)))

    def __neg__(self) -> "HomologyClass":
        return self.scale(-1)

    def scale(self, factor: int) -> "HomologyClass":
        return HomologyClass(a=factor * self.a, b=tuple(factor * x for x in self.b))

    def sort_key(self) -> Tuple[int, ...]:
        return (self.a,) + self.b

    def __str__(self) -> str:
        return f"{self.a};" + ",".join(str(x) for x in self.b)

    def to_payload(self) -> str:
        return str(self)

    def pretty(self) -> str:
        """Human form such as '4H-3E1' or '2H'."""
        parts = []
        if self.a:
            parts.append(f"{self.a}H" if self.a != 1 else "H")
        for i, coeff in enumerate(self.b, start=1):
            if coeff == 0:
                continue
            sign = "-" if coeff > 0 else "+"
            magnitude = abs(coeff)
            term = f"{magnitude}E{i}" if magnitude != 1 else f"E{i}"
            parts.append(f"{sign}{term}")
        if not parts:
            return "0"
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


# ==============================================
# COHOMOLOGIE
# ==============================================

class CohomClass(BaseModel):
    """Class x0 PD(H) - sum x_i PD(E_i) with exact rational coordinates."""
    x0: Fraction
    x: Tuple[Fraction, ...] = ()

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("x0", mode="before")
    @classmethod
    def _coerce_x0(cls, value: Any) -> Fraction:
        return to_fraction(value)

    @field_validator("x", mode="before")
    @classmethod
    def _coerce_x(cls, value: Any) -> Tuple[Fraction, ...]:
        return tuple(to_fraction(item) for item in value)

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def of(cls, x0: Rational, *x: Rational) -> "CohomClass":
        return cls(x0=x0, x=tuple(x))

    @classmethod
    def parse(cls, text: str) -> "CohomClass":
        head, items = _split_vector(text)
        return cls(x0=to_fraction(head), x=tuple(to_fraction(item) for item in items))

    def scale(self, factor: Rational) -> "CohomClass":
        factor = to_fraction(factor)
        return CohomClass(x0=factor * self.x0, x=tuple(factor * v for v in self.x))

    def blowup(self, eps: Rational) -> "CohomClass":
        """Append one more exceptional coordinate of size eps."""
        return CohomClass(x0=self.x0, x=self.x + (to_fraction(eps),))

    def normalized(self) -> "CohomClass":
        """Rescale so that x0 = 1."""
        return self.scale(1 / self.x0)

    def __str__(self) -> str:
        return format_fraction(self.x0) + ";" + ",".join(format_fraction(v) for v in self.x)

    def to_payload(self) -> str:
        return str(self)
