# capcalc/schemas/toric.py
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple
import json

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from capcalc.core.exceptions import InvalidInputError
from capcalc.schemas.classes import format_fraction, to_fraction

Point = Tuple[Fraction, Fraction]


def cross(u: Point, v: Point) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def _to_point(value: Any) -> Point:
    if isinstance(value, dict):
        value = (value.get("x"), value.get("y"))
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise InvalidInputError(f"a vertex needs two coordinates, got {value!r}")
    return (to_fraction(value[0]), to_fraction(value[1]))


def _signed_double_area(points: List[Point]) -> Fraction:
    total = Fraction(0)
    for i, p in enumerate(points):
        total += cross(p, points[(i + 1) % len(points)])
    return total


# ============ POLYGONES ============

class Polygon(BaseModel):
    """Strictly convex rational polygon, vertices stored counterclockwise."""
    vertices: Tuple[Point, ...]

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("vertices", mode="before")
    @classmethod
    def _orient(cls, value: Any) -> Tuple[Point, ...]:
        points = [_to_point(item) for item in value]
        if len(points) < 3:
            raise InvalidInputError(f"a polygon needs at least 3 vertices, got {len(points)}")
        if _signed_double_area(points) < 0:
            points.reverse()

        m = len(points)
        for i in range(m):
            start, end = points[i], points[(i + 1) % m]
            edge = _sub(end, start)
            if cross(edge, _sub(points[(i + 2) % m], end)) <= 0:
                raise InvalidInputError(f"polygon is not strictly convex at vertex {end}")
            if any(cross(edge, _sub(p, start)) < 0 for p in points):
                raise InvalidInputError("polygon is not convex")
        return tuple(points)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def corner(self, i: int) -> Tuple[Point, Point, Point]:
        """(previous, vertex, next) around vertex i."""
        m = self.size
        return self.vertices[(i - 1) % m], self.vertices[i % m], self.vertices[(i + 1) % m]

    def edges(self) -> List[Tuple[Point, Point]]:
        m = self.size
        return [(self.vertices[i], self.vertices[(i + 1) % m]) for i in range(m)]

    def index_of(self, vertex: Any) -> int:
        point = _to_point(vertex)
        try:
            return self.vertices.index(point)
        except ValueError:
            raise InvalidInputError(f"{point} is not a vertex of the polygon")

    @classmethod
    def from_points(cls, points) -> "Polygon":
        try:
            return cls(vertices=tuple(points))
        except ValidationError as e:
            raise InvalidInputError(f"invalid polygon: {e}")

    @classmethod
    def from_payload(cls, payload: Any) -> "Polygon":
        if not isinstance(payload, dict) or "vertices" not in payload:
            raise InvalidInputError('polygon JSON must be an object with a "vertices" list')
        return cls.from_points(payload["vertices"])

    @classmethod
    def parse_json(cls, text: str) -> "Polygon":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"malformed polygon JSON: {e}")
        return cls.from_payload(payload)

    def to_payload(self) -> Dict[str, List[List[str]]]:
        return {"vertices": [[format_fraction(x), format_fraction(y)] for x, y in self.vertices]}

    def __str__(self) -> str:
        return " ".join(f"({format_fraction(x)},{format_fraction(y)})" for x, y in self.vertices)


# ============ POIDS ============

class WeightSequence(BaseModel):
    """head; left weights; right weights."""
    head: Fraction
    left: Tuple[Fraction, ...] = ()
    right: Tuple[Fraction, ...] = ()

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("head", mode="before")
    @classmethod
    def _coerce_head(cls, value: Any) -> Fraction:
        return to_fraction(value)

    @field_validator("left", "right", mode="before")
    @classmethod
    def _coerce_tail(cls, value: Any) -> Tuple[Fraction, ...]:
        return tuple(to_fraction(item) for item in value)

    @model_validator(mode="after")
    def _check_weights(self) -> "WeightSequence":
        if self.head <= 0:
            raise ValueError(f"head must be positive, got {self.head}")
        for weight in self.left + self.right:
            if not 0 < weight < self.head:
                raise ValueError(f"weight {weight} must lie in (0, {self.head})")
        return self

    @property
    def tails(self) -> Tuple[Fraction, ...]:
        """left and right merged, descending"""
        return tuple(sorted(self.left + self.right, reverse=True))

    @property
    def twice_area(self) -> Fraction:
        return self.head * self.head - sum((t * t for t in self.tails), Fraction(0))

    @classmethod
    def parse(cls, text: str) -> "WeightSequence":
        """'head;b1,b2;c1,c2' with the tail groups optional."""
        if not isinstance(text, str) or not text.strip():
            raise InvalidInputError("empty weight sequence")
        parts = [part.strip() for part in text.strip().split(";")]
        if len(parts) > 3:
            raise InvalidInputError(f"too many ';' in {text!r}")
        parts += [""] * (3 - len(parts))

        def group(part: str) -> Tuple[Fraction, ...]:
            if not part:
                return ()
            items = [item.strip() for item in part.split(",")]
            if any(not item for item in items):
                raise InvalidInputError(f"empty weight in {text!r}")
            return tuple(to_fraction(item) for item in items)

        try:
            return cls(head=to_fraction(parts[0]), left=group(parts[1]), right=group(parts[2]))
        except ValidationError as e:
            raise InvalidInputError(f"invalid weight sequence {text!r}: {e}")

    def __str__(self) -> str:
        return ";".join(
            [
                format_fraction(self.head),
                ",".join(format_fraction(w) for w in self.left),
                ",".join(format_fraction(w) for w in self.right),
            ]
        )

    def to_payload(self) -> Dict[str, Any]:
        return {
            "head": format_fraction(self.head),
            "left": [format_fraction(w) for w in self.left],
            "right": [format_fraction(w) for w in self.right],
            "text": str(self),
        }


# ============ RESPONSE SCHEMAS ============

class PolygonCapacityRow(BaseModel):
    k: int = Field(..., ge=1)
    ech: Fraction
    fk: Optional[Fraction] = None
    equal: Optional[bool] = None

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def to_payload(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "ech": format_fraction(self.ech),
            "fk": format_fraction(self.fk) if self.fk is not None else None,
            "equal": self.equal,
        }
