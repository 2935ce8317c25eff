"""
JSON records for workbench results.

Each record is a pydantic model with a from_* constructor taking the domain
object and a parse_* function turning JSON text back into the domain object.
Intervals are written as [a, b] pairs or "[a,b]" tokens so records do not
depend on the P/S/I naming.
"""
import logging
from typing import List, Tuple

from pydantic import BaseModel, Field, RootModel, ValidationError, field_validator

from src.errors import InvalidInputError
from src.hn_filtration import HNResult
from src.objects import DerivedObject, Interval, parse_interval
from src.sod_tstab import LEFT, RIGHT, Filtration, Sod, TStability, make_filtration, make_sod, make_tstability
from src.exceptional import ExceptionalSequence, make_sequence
from src.typea_engine import ThickSubcat
from src.wpl2 import Wpl2Sequence, make_wpl2_sequence, parse_wpl2_object

logger = logging.getLogger(__name__)


def _load(model, text: str):
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise InvalidInputError(f"Invalid {model.__name__}: {e.errors()[0]['msg']}", detail=str(e))


def _token(x: Interval) -> str:
    return f"[{x.a},{x.b}]"


def _block_tokens(block: ThickSubcat) -> List[str]:
    return [_token(x) for x in block.sorted_members()]


def _block_from_tokens(n: int, tokens: List[str]) -> ThickSubcat:
    members = set()
    for t in tokens:
        iv, shift = parse_interval(n, t)
        if shift:
            raise InvalidInputError(f"Block members are given up to shift, got {t!r}")
        members.add(iv)
    return ThickSubcat(n, frozenset(members))


class TermRecord(BaseModel):
    interval: Tuple[int, int] = Field(description="Interval [a, b] of the module")
    shift: int = Field(default=0, description="Shift of the module")
    mult: int = Field(default=1, description="Multiplicity")

    @field_validator("mult")
    @classmethod
    def positive_multiplicity(cls, v):
        if v < 1:
            raise ValueError("multiplicity must be positive")
        return v


class DerivedObjectRecord(RootModel[List[TermRecord]]):
    """Bare list of summands in canonical (shift, a, b) order; the rank travels with the enclosing record."""

    @classmethod
    def from_object(cls, obj: DerivedObject) -> "DerivedObjectRecord":
        counts = obj.multiplicities()
        keys = sorted(counts, key=lambda t: (t[1], t[0].a, t[0].b))
        return cls([TermRecord(interval=(iv.a, iv.b), shift=s, mult=counts[(iv, s)]) for iv, s in keys])

    def to_object(self, n: int) -> DerivedObject:
        pieces = []
        for t in self.root:
            iv = Interval(*t.interval).check_rank(n)
            pieces.extend([(iv, t.shift)] * t.mult)
        return DerivedObject.build(n, pieces)


def parse_object_record(text: str, n: int) -> DerivedObject:
    return _load(DerivedObjectRecord, text).to_object(n)


class SequenceRecord(BaseModel):
    n: int
    items: List[Tuple[int, int]] = Field(description="Intervals of the sequence, in order")
    names: List[str] = Field(default=[])
    full: bool = True

    @classmethod
    def from_sequence(cls, s: ExceptionalSequence) -> "SequenceRecord":
        return cls(n=s.n, items=[(x.a, x.b) for x in s.items], names=s.names(), full=s.full)


def parse_sequence_record(text: str) -> ExceptionalSequence:
    record = _load(SequenceRecord, text)
    return make_sequence(record.n, [Interval(a, b) for a, b in record.items])


class SodRecord(BaseModel):
    n: int
    name: str = ""
    blocks: List[List[str]] = Field(description="Blocks as lists of interval tokens")

    @classmethod
    def from_sod(cls, s: Sod) -> "SodRecord":
        return cls(n=s.n, name=s.name(), blocks=[_block_tokens(b) for b in s.blocks])


def parse_sod_record(text: str) -> Sod:
    record = _load(SodRecord, text)
    return make_sod(record.n, [_block_from_tokens(record.n, b) for b in record.blocks])


class TStabilityRecord(BaseModel):
    n: int
    name: str = ""
    pieces: List[List[str]] = Field(description="Pieces by increasing phase")

    @classmethod
    def from_tstability(cls, t: TStability) -> "TStabilityRecord":
        return cls(n=t.n, name=t.name(), pieces=[_block_tokens(p) for p in t.pieces])


def parse_tstability_record(text: str) -> TStability:
    record = _load(TStabilityRecord, text)
    return make_tstability(record.n, [_block_from_tokens(record.n, p) for p in record.pieces])


class FiltrationRecord(BaseModel):
    n: int
    side: str = RIGHT
    name: str = ""
    chain: List[List[str]] = Field(description="T_1, ..., T_m; T_0 = 0 is implicit")

    @field_validator("side")
    @classmethod
    def known_side(cls, v):
        if v not in (LEFT, RIGHT):
            raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")
        return v

    @classmethod
    def from_filtration(cls, f: Filtration) -> "FiltrationRecord":
        return cls(n=f.n, side=f.side, name=f.name(), chain=[_block_tokens(t) for t in f.chain])


def parse_filtration_record(text: str) -> Filtration:
    record = _load(FiltrationRecord, text)
    chain = [_block_from_tokens(record.n, t) for t in record.chain]
    return make_filtration(record.n, chain, record.side)


class HNFactorRecord(BaseModel):
    object: DerivedObjectRecord
    phase: int


class HNRecord(BaseModel):
    n: int
    object: DerivedObjectRecord
    factors: List[HNFactorRecord] = Field(description="Highest phase first")
    summary: str = ""

    @classmethod
    def from_result(cls, result: HNResult) -> "HNRecord":
        factors = [HNFactorRecord(object=DerivedObjectRecord.from_object(f.obj), phase=f.phase) for f in result.factors]
        return cls(n=result.obj.n, object=DerivedObjectRecord.from_object(result.obj), factors=factors, summary=result.summary())


def parse_hn_record(text: str) -> List[Tuple[DerivedObject, int]]:
    """Factors as (object, phase) pairs, ready for normalize_tower."""
    record = _load(HNRecord, text)
    return [(f.object.to_object(record.n), f.phase) for f in record.factors]


class GraphRecord(BaseModel):
    vertices: List[str] = Field(description="Vertex names in canonical order")
    edges: List[Tuple[int, int, str]] = Field(default=[], description="(source, target, label)")

    @classmethod
    def from_graph(cls, g) -> "GraphRecord":
        return cls(vertices=g.labels(), edges=g.edges())

    @field_validator("edges")
    @classmethod
    def sorted_edges(cls, v):
        return sorted(v)


def parse_graph_record(text: str) -> GraphRecord:
    record = _load(GraphRecord, text)
    for u, v, _ in record.edges:
        if not (0 <= u < len(record.vertices) and 0 <= v < len(record.vertices)):
            raise InvalidInputError(f"Edge ({u}, {v}) refers to a missing vertex")
    return record


class Wpl2SequenceRecord(BaseModel):
    items: List[str] = Field(description="Object tokens such as 'O(-2)', 'S10'")

    @classmethod
    def from_sequence(cls, s: Wpl2Sequence) -> "Wpl2SequenceRecord":
        return cls(items=s.names())


def parse_wpl2_sequence_record(text: str) -> Wpl2Sequence:
    record = _load(Wpl2SequenceRecord, text)
    return make_wpl2_sequence([parse_wpl2_object(t) for t in record.items])


def dump(record: BaseModel) -> str:
    return record.model_dump_json()


def dump_list(records: List[BaseModel]) -> str:
    """JSON array of records, one per line."""
    if not records:
        return "[]"
    return "[\n" + ",\n".join(r.model_dump_json() for r in records) + "\n]"
