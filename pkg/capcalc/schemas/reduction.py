# capcalc/schemas/reduction.py
from typing import Annotated, Any, Dict, List, Literal, Sequence, Tuple, TypeVar, Union

from pydantic import BaseModel, Field, model_validator

from capcalc.core.exceptions import InvalidIndicesError
from capcalc.schemas.classes import CohomClass, HomologyClass

T = TypeVar("T")


# ==============================================
# ÉTAPES DE RÉDUCTION
# ==============================================

class SortStep(BaseModel):
    """Permutation of the exceptional labels: new label p carries old label perm[p-1]."""
    op: Literal["sort"] = "sort"
    perm: Tuple[int, ...]

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check_permutation(self) -> "SortStep":
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.perm)}: {self.perm}")
        return self

    def apply(self, head: T, tail: Sequence[T]) -> Tuple[T, Tuple[T, ...]]:
        if len(tail) != len(self.perm):
            raise InvalidIndicesError(f"sort step of size {len(self.perm)} applied to n={len(tail)}")
        return head, tuple(tail[label - 1] for label in self.perm)

    def undo(self, head: T, tail: Sequence[T]) -> Tuple[T, Tuple[T, ...]]:
        if len(tail) != len(self.perm):
            raise InvalidIndicesError(f"sort step of size {len(self.perm)} applied to n={len(tail)}")
        restored: List[Any] = [None] * len(tail)
        for position, label in enumerate(self.perm):
            restored[label - 1] = tail[position]
        return head, tuple(restored)

    def to_payload(self) -> Dict[str, Any]:
        return {"op": "sort", "perm": list(self.perm)}


class CremonaStep(BaseModel):
    """Reflection along H - E_i - E_j - E_k (1-based labels); an involution."""
    op: Literal["cremona"] = "cremona"
    ijk: Tuple[int, int, int]

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check_indices(self) -> "CremonaStep":
        if len(set(self.ijk)) != 3 or min(self.ijk) < 1:
            raise ValueError(f"reflection needs three distinct positive labels, got {self.ijk}")
        return self

    def apply(self, head: T, tail: Sequence[T]) -> Tuple[T, Tuple[T, ...]]:
        if max(self.ijk) > len(tail):
            raise InvalidIndicesError(f"labels {self.ijk} out of range for n={len(tail)}")
        i, j, k = (label - 1 for label in self.ijk)
        defect = head - tail[i] - tail[j] - tail[k]
        new_tail = list(tail)
        for m in (i, j, k):
            new_tail[m] = tail[m] + defect
        return head + defect, tuple(new_tail)

    def undo(self, head: T, tail: Sequence[T]) -> Tuple[T, Tuple[T, ...]]:
        return self.apply(head, tail)

    def to_payload(self) -> Dict[str, Any]:
        return {"op": "cremona", "ijk": list(self.ijk)}


Step = Annotated[Union[SortStep, CremonaStep], Field(discriminator="op")]


class ReductionTrace(BaseModel):
    """Ordered moves taking an input class into the reduced frame."""
    steps: List[Step] = Field(default_factory=list)

    class Config:
        frozen = True

    @property
    def reflections(self) -> int:
        return sum(1 for step in self.steps if isinstance(step, CremonaStep))

    def replay(self, head: T, tail: Sequence[T]) -> Tuple[T, Tuple[T, ...]]:
        tail = tuple(tail)
        for step in self.steps:
            head, tail = step.apply(head, tail)
        return head, tail

    def rewind(self, head: T, tail: Sequence[T]) -> Tuple[T, Tuple[T, ...]]:
        tail = tuple(tail)
        for step in reversed(self.steps):
            head, tail = step.undo(head, tail)
        return head, tail

    def apply_to_cohom(self, w: CohomClass) -> CohomClass:
        x0, x = self.replay(w.x0, w.x)
        return CohomClass(x0=x0, x=x)

    def undo_cohom(self, w: CohomClass) -> CohomClass:
        x0, x = self.rewind(w.x0, w.x)
        return CohomClass(x0=x0, x=x)

    def apply_to_class(self, A: HomologyClass) -> HomologyClass:
        """Transport A into the reduced frame; pairings with the transported omega are kept."""
        a, b = self.replay(A.a, A.b)
        return HomologyClass(a=a, b=b)

    def pull_back_class(self, A: HomologyClass) -> HomologyClass:
        """Transport a reduced-frame class back to the input frame."""
        a, b = self.rewind(A.a, A.b)
        return HomologyClass(a=a, b=b)

    def to_payload(self) -> List[Dict[str, Any]]:
        return [step.to_payload() for step in self.steps]

    @classmethod
    def from_payload(cls, payload: List[Dict[str, Any]]) -> "ReductionTrace":
        return cls(steps=payload)


# ==============================================
# SOMMETS DU CÔNE c1-NEF
# ==============================================

class ConeVertexSet(BaseModel):
    """Vertices (x0 = 1) of the closed c1-nef part of the reduced cone."""
    n: int = Field(..., ge=0)
    vertices: Tuple[CohomClass, ...]

    class Config:
        frozen = True
