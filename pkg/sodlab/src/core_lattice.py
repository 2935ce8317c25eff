"""
Quiver descriptions, the Grothendieck group K0 as an integer lattice,
and the Euler form of the two supported hereditary categories.
"""
import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.errors import InvalidInputError

WPL2_RANK = 3


class QuiverKind(str, Enum):
    """Supported categories."""

    TYPE_A = "typeA"
    WPL2 = "wpl2"


class QuiverSpec(BaseModel):
    """Equioriented type A_n quiver (arrows i -> i+1) or the weighted projective line X(2)."""

    model_config = ConfigDict(frozen=True)

    kind: QuiverKind = Field(description="typeA or wpl2")
    n: Optional[int] = Field(default=None, description="Number of vertices for typeA")

    @model_validator(mode="after")
    def check_parameters(self):
        """typeA needs n >= 1; wpl2 carries no parameters."""
        if self.kind == QuiverKind.TYPE_A:
            if self.n is None or self.n < 1:
                raise ValueError("typeA quiver needs n >= 1")
        elif self.n is not None:
            raise ValueError("wpl2 takes no parameters")
        return self

    @property
    def rank(self) -> int:
        """Rank of K0."""
        return self.n if self.kind == QuiverKind.TYPE_A else WPL2_RANK

    @property
    def is_type_a(self) -> bool:
        return self.kind == QuiverKind.TYPE_A

    def to_json(self) -> str:
        if self.is_type_a:
            return json.dumps({"kind": "typeA", "n": self.n})
        return json.dumps({"kind": "wpl2"})


def type_a(n: int) -> QuiverSpec:
    """Shorthand for QuiverSpec(kind=typeA, n=n)."""
    try:
        return QuiverSpec(kind=QuiverKind.TYPE_A, n=n)
    except ValidationError as e:
        raise InvalidInputError(f"Invalid quiver: {e.errors()[0]['msg']}") from e


def wpl2() -> QuiverSpec:
    return QuiverSpec(kind=QuiverKind.WPL2)


def parse_quiver(text: str) -> QuiverSpec:
    """Parse the QuiverSpec JSON interface, e.g. {"kind":"typeA","n":3}."""
    try:
        return QuiverSpec.model_validate_json(text)
    except ValidationError as e:
        raise InvalidInputError(f"Invalid quiver spec {text!r}: {e.errors()[0]['msg']}") from e


def require_type_a(q: QuiverSpec, operation: str) -> int:
    """Return n for a typeA quiver, reject X(2) for typeA-only operations."""
    if not q.is_type_a:
        raise InvalidInputError(f"{operation} is only defined for typeA quivers")
    return q.n


@dataclass(frozen=True)
class K0Class:
    """Integer coordinate vector in K0 (simple basis for typeA; ([O],[S10],[Sx]) for X(2))."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def zero(cls, rank: int) -> "K0Class":
        return cls((0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def _check(self, other: "K0Class"):
        if other.rank != self.rank:
            raise InvalidInputError(f"K0 rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "K0Class") -> "K0Class":
        self._check(other)
        return K0Class(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "K0Class") -> "K0Class":
        self._check(other)
        return K0Class(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "K0Class":
        return K0Class(tuple(-a for a in self.coords))

    def scale(self, factor: int) -> "K0Class":
        return K0Class(tuple(factor * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


@dataclass(frozen=True)
class EulerForm:
    """Integer Gram matrix of the Euler form on the chosen K0 basis."""

    matrix: tuple

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    def pair(self, x: K0Class, y: K0Class) -> int:
        if x.rank != self.rank or y.rank != self.rank:
            raise InvalidInputError(
                f"Dimension mismatch: classes of length {x.rank}, {y.rank} for a rank {self.rank} form"
            )
        return int(x.as_array() @ self.as_array() @ y.as_array())


# ([O], [S10], [Sx]) basis; entries are <b_i, b_j>
_WPL2_EULER = ((1, 1, 1), (0, 1, 0), (-1, 0, 0))


def euler_form(q: QuiverSpec) -> EulerForm:
    """Euler form of mod-A_n (1 on the diagonal, -1 above it) or of coh X(2)."""
    if not q.is_type_a:
        return EulerForm(_WPL2_EULER)
    n = q.n
    matrix = np.eye(n, dtype=np.int64) - np.eye(n, k=1, dtype=np.int64)
    return EulerForm(tuple(tuple(int(v) for v in row) for row in matrix))


def _as_class(x: Union[K0Class, Sequence[int]]) -> K0Class:
    return x if isinstance(x, K0Class) else K0Class(tuple(x))


def euler_pairing(q: QuiverSpec, x: Union[K0Class, Sequence[int]], y: Union[K0Class, Sequence[int]]) -> int:
    """<x, y> = sum_k (-1)^k dim Hom(X, Y[k]) for objects with classes x, y."""
    x, y = _as_class(x), _as_class(y)
    if x.rank != q.rank or y.rank != q.rank:
        raise InvalidInputError(
            f"Dimension mismatch: expected length {q.rank}, got {x.rank} and {y.rank}"
        )
    return euler_form(q).pair(x, y)
