# capcalc/schemas/tropical.py
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from capcalc.schemas.classes import HomologyClass, format_fraction

_SUPERSCRIPTS = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")
_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _monomial(term: HomologyClass) -> str:
    parts = [str(term.a)]
    for i, b in enumerate(term.b, start=1):
        if b == 0:
            continue
        variable = "x" if term.n == 1 else "x" + str(i).translate(_SUBSCRIPTS)
        parts.append(variable + str(-b).translate(_SUPERSCRIPTS))
    return "⊙".join(parts)


# ============ RESPONSE SCHEMAS ============

class TropicalCapacity(BaseModel):
    """f_k on the c1-nef cone as the minimum of finitely many areas."""
    n: int = Field(..., ge=0)
    k: int = Field(..., ge=1)
    terms: Tuple[HomologyClass, ...]
    certified: bool
    a_max: int = Field(..., ge=0, description="largest H-coefficient enumerated")

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check_terms(self) -> "TropicalCapacity":
        if not self.terms:
            raise ValueError("a tropical capacity needs at least one term")
        for term in self.terms:
            if term.n != self.n:
                raise ValueError(f"term {term} does not match n={self.n}")
        return self

    def pretty(self) -> str:
        """Tropical notation, e.g. (5⊙x⁻⁵)⊕(3⊙x⁻²)⊕2."""
        ordered = sorted(self.terms, key=HomologyClass.sort_key, reverse=True)
        pieces = []
        for term in ordered:
            text = _monomial(term)
            if len(ordered) > 1 and "⊙" in text:
                text = f"({text})"
            pieces.append(text)
        return "⊕".join(pieces)

    def to_payload(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "certified": self.certified,
            "a_max": self.a_max,
            "terms": [term.to_payload() for term in self.terms],
            "pretty": self.pretty(),
        }


class BoundCertificate(BaseModel):
    """Explicit constants bounding the H-coefficient of every minimal class."""
    n: int
    k: int
    C: Fraction = Field(..., description="3 x max of kH - kE1 over the cone vertices")
    D: Fraction = Field(..., description="bound on |c| and |d_i| after removing the 3H - E1..E8 part")
    A: int = Field(..., description="threshold beyond which kH - kE1 is dominated")
    eps: Optional[Fraction] = None
    a_max: int
    work: int = Field(..., description="estimated number of candidate tails")
    practical: bool

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def to_payload(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "C": format_fraction(self.C),
            "D": format_fraction(self.D),
            "A": self.A,
            "eps": format_fraction(self.eps) if self.eps is not None else None,
            "a_max": self.a_max,
            "practical": self.practical,
        }
