# capcalc/schemas/cli.py
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

from capcalc.core.exceptions import InvalidInputError


# ==================== ENUMS ====================

class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    PRETTY = "pretty"


class PlotFormat(str, Enum):
    CSV = "csv"
    SVG = "svg"


class Subcommand(str, Enum):
    FK = "fk"
    TROPICAL = "tropical"
    REDUCE = "reduce"
    POLYGON = "polygon"
    WEIGHTS = "weights"
    PLOT = "plot"
    VERIFY = "verify"


# ==================== PARAMÈTRES ====================

class KRange(BaseModel):
    """Inclusive range of capacity indices, written 'a..b' or 'a'."""
    lo: int = Field(..., ge=1)
    hi: int = Field(..., ge=1)

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check_order(self) -> "KRange":
        if self.lo > self.hi:
            raise ValueError(f"empty k-range {self.lo}..{self.hi}")
        return self

    @classmethod
    def parse(cls, text: str) -> "KRange":
        text = (text or "").strip()
        lo, sep, hi = text.partition("..")
        try:
            lo_value = int(lo)
            hi_value = int(hi) if sep else lo_value
        except ValueError:
            raise InvalidInputError(f"malformed k-range {text!r}, expected 'a..b' or 'a'")
        try:
            return cls(lo=lo_value, hi=hi_value)
        except ValidationError as e:
            raise InvalidInputError(f"invalid k-range {text!r}: {e.errors()[0]['msg']}")

    def values(self) -> List[int]:
        return list(range(self.lo, self.hi + 1))

    def __str__(self) -> str:
        return f"{self.lo}..{self.hi}" if self.hi != self.lo else str(self.lo)


class RunConfig(BaseModel):
    """Validated options of one CLI invocation."""
    subcommand: Subcommand
    source: Optional[str] = Field(None, description="inline value or path to an input file")
    k_range: Optional[KRange] = None
    output_format: OutputFormat = OutputFormat.JSON
    samples: int = Field(64, ge=2)
    plot_format: PlotFormat = PlotFormat.CSV
    mark_breakpoints: bool = False
    out: Optional[str] = None


# ============ RESPONSE SCHEMAS ============

class PlotRow(BaseModel):
    """One sample of the capacity curves x -> f_k(1 | x)."""
    x: Fraction
    values: Tuple[Fraction, ...]
    breakpoint: bool = False

    class Config:
        frozen = True
        arbitrary_types_allowed = True
