# capcalc/schemas/capacity.py
from fractions import Fraction
from typing import Any, Dict, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from capcalc.schemas.classes import CohomClass, HomologyClass, format_fraction, to_fraction
from capcalc.schemas.reduction import ReductionTrace


# ============ RESPONSE SCHEMAS ============

class CapacityResult(BaseModel):
    """f_k at one symplectic class, with every reduced optimal class."""
    k: int = Field(..., ge=1)
    value: Fraction
    witnesses: Tuple[HomologyClass, ...]
    omega_reduced: CohomClass
    trace: ReductionTrace = Field(default_factory=ReductionTrace)
    boundary: bool = False

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("value", mode="before")
    @classmethod
    def _coerce_value(cls, value: Any) -> Fraction:
        return to_fraction(value)

    @model_validator(mode="after")
    def _check_witnesses(self) -> "CapacityResult":
        if self.value <= 0:
            raise ValueError(f"capacity must be positive, got {self.value}")
        if not self.witnesses:
            raise ValueError("at least one witness is required")
        w = self.omega_reduced
        for A in self.witnesses:
            if A.n != w.n:
                raise ValueError(f"witness {A} does not match n={w.n}")
            if A.a < 1 or A.a * A.a + 3 * A.a - sum(b * b + b for b in A.b) < 2 * self.k:
                raise ValueError(f"witness {A} is not in U5 for k={self.k}")
            if A.a * w.x0 - sum((b * x for b, x in zip(A.b, w.x)), Fraction(0)) != self.value:
                raise ValueError(f"witness {A} does not attain {self.value}")
        return self

    def to_payload(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "value": format_fraction(self.value),
            "witnesses": [A.to_payload() for A in self.witnesses],
            "reduced_omega": self.omega_reduced.to_payload(),
            "boundary": self.boundary,
            "trace": self.trace.to_payload(),
        }


class BlowupTerm(BaseModel):
    """f_k after one extra blow-up of size eps."""
    eps: Fraction
    value: Fraction

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def to_payload(self) -> Dict[str, str]:
        return {"eps": format_fraction(self.eps), "value": format_fraction(self.value)}
