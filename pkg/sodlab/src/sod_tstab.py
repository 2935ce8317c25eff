"""
Semi-orthogonal decompositions, finite t-stabilities and admissible filtrations.

The three views carry the same data (an ordered list of thick subcategories,
or a chain of them) and are related by eta (t-stability <-> SOD), xi
(SOD <-> right admissible filtration) and chi (full exceptional sequence ->
finest SOD). Mutations rho act on SODs and sigma on filtrations.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from src.config import get_max_finer_blocks
from src.core_lattice import QuiverSpec, require_type_a, type_a
from src.errors import CapacityError, ConsistencyError, InvalidInputError
from src.exceptional import ExceptionalSequence, is_exceptional
from src.objects import DerivedObject, Interval, parse_intervals, split_top_level
from src.typea_engine import (
    ThickSubcat,
    _closure,
    exceptional_sequences_in,
    generating_sequence,
    graded_hom_vanishes,
    intersect,
    perp,
    thick_closure,
    whole_category,
    zero_subcat,
)

logger = logging.getLogger(__name__)

RIGHT = "right"
LEFT = "left"


def _union(n: int, subcats: Iterable[ThickSubcat]) -> ThickSubcat:
    members = frozenset().union(*[s.members for s in subcats])
    return ThickSubcat(n, _closure(n, members))


def _blocks_text(n: int, blocks: Sequence[ThickSubcat]) -> str:
    return "(" + "|".join(",".join(b.member_names()) for b in blocks) + ")"


@dataclass(frozen=True)
class Sod:
    """Ordered blocks (Pi_1, ..., Pi_m) with Hom(Pi_j, Pi_i) = 0 for i < j."""

    n: int
    blocks: Tuple[ThickSubcat, ...]
    witness: Optional[Tuple[Interval, ...]] = field(default=None, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.blocks)

    def ambient(self) -> ThickSubcat:
        return _union(self.n, self.blocks)

    def is_trivial(self) -> bool:
        return len(self.blocks) == 1

    def name(self) -> str:
        return _blocks_text(self.n, self.blocks)

    def __str__(self) -> str:
        return self.name()


@dataclass(frozen=True)
class TStability:
    """Finite t-stability on the index set 1 < ... < m; tau_Phi is the identity."""

    n: int
    pieces: Tuple[ThickSubcat, ...]

    @property
    def blocks(self) -> Tuple[ThickSubcat, ...]:
        return self.pieces

    @property
    def phases(self) -> range:
        return range(1, len(self.pieces) + 1)

    def tau_phi(self, phase: int) -> int:
        return phase

    def __len__(self) -> int:
        return len(self.pieces)

    def ambient(self) -> ThickSubcat:
        return _union(self.n, self.pieces)

    def piece_of(self, x: Interval) -> Optional[int]:
        for phase, piece in zip(self.phases, self.pieces):
            if x in piece.members:
                return phase
        return None

    def name(self) -> str:
        return _blocks_text(self.n, self.pieces)

    def __str__(self) -> str:
        return self.name()


@dataclass(frozen=True)
class Filtration:
    """Chain 0 = T_0 c T_1 c ... c T_m of thick subcategories; T_0 is implicit."""

    n: int
    chain: Tuple[ThickSubcat, ...]
    side: str = RIGHT

    def __len__(self) -> int:
        return len(self.chain)

    def term(self, i: int) -> ThickSubcat:
        """T_i with T_0 = 0."""
        return zero_subcat(self.n) if i == 0 else self.chain[i - 1]

    def name(self) -> str:
        return "0 < " + " < ".join(t.name() for t in self.chain)

    def __str__(self) -> str:
        return self.name()


def _resolve_ambient(n: int, ambient: Optional[ThickSubcat]) -> ThickSubcat:
    return ambient if ambient is not None else whole_category(n)


def _check_blocks(n: int, blocks: Sequence[ThickSubcat], ambient: ThickSubcat, what: str):
    if not blocks:
        raise InvalidInputError(f"{what} needs at least one block")
    for i, block in enumerate(blocks, start=1):
        if block.is_zero():
            raise InvalidInputError(f"{what} block {i} is zero", axiom="nonzero blocks")
        if _closure(n, block.members) != block.members:
            raise InvalidInputError(f"{what} block {i} {block.name()} is not thick", axiom="shift-closed pieces")
    if len(set(blocks)) != len(blocks):
        raise InvalidInputError(f"{what} has repeated blocks", axiom="distinct blocks")
    for j in range(len(blocks)):
        for i in range(j):
            for y in blocks[j].members:
                for x in blocks[i].members:
                    if not graded_hom_vanishes(n, y, x):
                        raise InvalidInputError(
                            f"{what}: Hom({y.label(n)}, {x.label(n)}[*]) != 0 with block {j + 1} after block {i + 1}",
                            axiom="semiorthogonality",
                            detail=f"{j + 1}->{i + 1}",
                        )
    if _union(n, blocks) != ambient:
        raise InvalidInputError(f"{what} blocks do not generate {ambient.name()}", axiom="generation")


def make_sod(n: int, blocks: Sequence[ThickSubcat], ambient: Optional[ThickSubcat] = None,
             witness: Optional[Sequence[Interval]] = None) -> Sod:
    blocks = tuple(blocks)
    _check_blocks(n, blocks, _resolve_ambient(n, ambient), "SOD")
    return Sod(n, blocks, tuple(witness) if witness is not None else _singleton_witness(blocks))


def make_tstability(n: int, pieces: Sequence[ThickSubcat], ambient: Optional[ThickSubcat] = None) -> TStability:
    pieces = tuple(pieces)
    _check_blocks(n, pieces, _resolve_ambient(n, ambient), "t-stability")
    return TStability(n, pieces)


def make_filtration(n: int, chain: Sequence[ThickSubcat], side: str = RIGHT,
                    ambient: Optional[ThickSubcat] = None) -> Filtration:
    """Validate strict inclusions, the top term and admissibility of each step."""
    chain = tuple(chain)
    ambient = _resolve_ambient(n, ambient)
    if side not in (RIGHT, LEFT):
        raise InvalidInputError(f"Unknown filtration side {side!r}")
    if not chain or chain[-1] != ambient:
        raise InvalidInputError(f"Filtration must end at {ambient.name()}")
    previous = zero_subcat(n)
    for i, term in enumerate(chain, start=1):
        if not previous.members < term.members:
            raise InvalidInputError(f"T_{i - 1} is not strictly contained in T_{i}")
        if _closure(n, term.members) != term.members:
            raise InvalidInputError(f"T_{i} is not thick")
        complement = perp(previous, side, within=term)
        if _union(n, (complement, previous)) != term:
            raise InvalidInputError(f"T_{i - 1} is not {side} admissible in T_{i}", axiom="admissibility")
        previous = term
    return Filtration(n, chain, side)


def _singleton_witness(blocks: Sequence[ThickSubcat]) -> Optional[Tuple[Interval, ...]]:
    if all(len(b) == 1 for b in blocks):
        return tuple(next(iter(b.members)) for b in blocks)
    return None


def parse_blocks(n: int, text: str) -> List[ThickSubcat]:
    """'(P1,S2|I2)': blocks separated by '|', each the closure of its listed generators."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    blocks = []
    for part in split_top_level(text, "|"):
        gens = parse_intervals(n, part)
        if not gens:
            raise InvalidInputError(f"Empty block in {text!r}")
        blocks.append(thick_closure(gens, n))
    return blocks


def parse_sod(n: int, text: str) -> Sod:
    return make_sod(n, parse_blocks(n, text))


def parse_tstability(n: int, text: str, ambient: Optional[ThickSubcat] = None) -> TStability:
    return make_tstability(n, parse_blocks(n, text), ambient)


def eta(t: TStability, ambient: Optional[ThickSubcat] = None) -> Sod:
    """t-stability -> SOD, same blocks, axioms rechecked."""
    return make_sod(t.n, t.pieces, ambient)


def eta_inv(s: Sod, ambient: Optional[ThickSubcat] = None) -> TStability:
    return make_tstability(s.n, s.blocks, ambient)


def xi(s: Sod) -> Filtration:
    """T_i = <Pi_j : j >= m - i + 1>."""
    m = len(s.blocks)
    chain = [_union(s.n, s.blocks[m - i:]) for i in range(1, m + 1)]
    return make_filtration(s.n, chain, RIGHT, s.ambient())


def xi_inv(f: Filtration) -> Sod:
    """Pi_i = T_{m-i}^perp inside T_{m-i+1}."""
    if f.side != RIGHT:
        raise InvalidInputError("xi_inv expects a right admissible filtration")
    m = len(f.chain)
    blocks = [perp(f.term(m - i), RIGHT, within=f.term(m - i + 1)) for i in range(1, m + 1)]
    return make_sod(f.n, blocks, f.chain[-1])


def left_chain(f: Filtration) -> Filtration:
    """Left admissible chain L_j = T_{m-j}^perp = <Pi_1, ..., Pi_j>."""
    if f.side != RIGHT:
        raise InvalidInputError("left_chain expects a right admissible filtration")
    m = len(f.chain)
    top = f.chain[-1]
    chain = [perp(f.term(m - j), RIGHT, within=top) for j in range(1, m + 1)]
    return make_filtration(f.n, chain, LEFT, top)


def chi(seq: ExceptionalSequence) -> Sod:
    """Exceptional sequence -> SOD of the subcategory it generates, blocks <E_i>."""
    blocks = [thick_closure([x], seq.n) for x in seq.items]
    ambient = None if seq.full else _union(seq.n, blocks)
    return make_sod(seq.n, blocks, ambient, witness=seq.items)


def first_non_exceptional_block(s: Sod) -> Optional[int]:
    for i, block in enumerate(s.blocks, start=1):
        if len(block) != 1 or not is_exceptional(DerivedObject.module(s.n, next(iter(block.members)))):
            return i
    return None


def chi_inv(s: Sod) -> Optional[ExceptionalSequence]:
    """Inverse of chi on finest SODs; None when some block is not <E> for one exceptional E."""
    offending = first_non_exceptional_block(s)
    if offending is not None:
        logger.info(f"chi_inv: block {offending} of {s.name()} is not generated by one exceptional object")
        return None
    items = tuple(next(iter(b.members)) for b in s.blocks)
    return ExceptionalSequence(s.n, items, s.ambient() == whole_category(s.n))


Stratified = Union[Sod, TStability]


def finer_map(a: Stratified, b: Stratified) -> Optional[Tuple[int, ...]]:
    """Monotone surjection r with b_psi = <a_i : r(i) = psi>, or None."""
    la, lb = len(a.blocks), len(b.blocks)
    cap = get_max_finer_blocks()
    if la > cap:
        raise CapacityError(f"is_finer searches at most {cap} blocks, got {la}")
    if lb > la or a.n != b.n:
        return None
    for cuts in combinations(range(1, la), lb - 1):
        bounds = (0,) + cuts + (la,)
        if all(_union(a.n, a.blocks[bounds[k]:bounds[k + 1]]) == b.blocks[k] for k in range(lb)):
            return tuple(k + 1 for k in range(lb) for _ in range(bounds[k], bounds[k + 1]))
    return None


def is_finer(a: Stratified, b: Stratified) -> bool:
    return finer_map(a, b) is not None


def finest_certificate_failure(s: Stratified) -> Optional[Tuple[Interval, Interval]]:
    """First pair X, Y in a common block with Hom*(<X>,<Y>) = 0 or Hom*(<Y>,<X>) = 0."""
    n = s.n
    for block in s.blocks:
        members = block.sorted_members()
        for i, x in enumerate(members):
            for y in members[i + 1:]:
                gx = _closure(n, frozenset([x]))
                gy = _closure(n, frozenset([y]))
                forward = any(not graded_hom_vanishes(n, u, v) for u in gx for v in gy)
                backward = any(not graded_hom_vanishes(n, v, u) for u in gx for v in gy)
                if not (forward and backward):
                    return x, y
    return None


def is_finest_sufficient(s: Stratified) -> bool:
    return finest_certificate_failure(s) is None


@lru_cache(maxsize=None)
def _all_sods(n: int, ambient: FrozenSet[Interval], finest_only: bool) -> Tuple[Sod, ...]:
    seen = {}
    for seq in exceptional_sequences_in(n, ambient):
        m = len(seq)
        if finest_only:
            cut_sets = [tuple(range(1, m))] if m > 1 else []
        else:
            cut_sets = [c for parts in range(2, m + 1) for c in combinations(range(1, m), parts - 1)]
        for cuts in cut_sets:
            bounds = (0,) + tuple(cuts) + (m,)
            blocks = tuple(
                ThickSubcat(n, _closure(n, frozenset(seq[bounds[k]:bounds[k + 1]])))
                for k in range(len(bounds) - 1)
            )
            if blocks not in seen:
                seen[blocks] = Sod(n, blocks, seq)
    logger.debug(f"A_{n}: {len(seen)} SODs on {len(ambient)} indecomposables (finest_only={finest_only})")
    return tuple(seen.values())


def enumerate_all_sods(q: QuiverSpec, finest_only: bool = False,
                       ambient: Optional[ThickSubcat] = None) -> List[Sod]:
    """Every non-trivial SOD: each consecutive partition of each full exceptional sequence, deduplicated."""
    n = require_type_a(q, "enumerate_all_sods")
    members = _resolve_ambient(n, ambient).members
    return list(_all_sods(n, members, finest_only))


def finest_sods(ambient: ThickSubcat) -> List[Sod]:
    """Finest SODs of a thick subcategory, including the single-block one in rank 1."""
    n = ambient.n
    return [
        Sod(n, tuple(ThickSubcat(n, frozenset([x])) for x in seq), seq)
        for seq in exceptional_sequences_in(n, ambient.members)
    ]


def is_finest_exhaustive(s: Sod) -> bool:
    """No strictly finer SOD of the same category exists."""
    ambient = s.ambient()
    for other in enumerate_all_sods(type_a(s.n), ambient=ambient):
        if len(other) > len(s) and is_finer(other, s):
            return False
    return True


def refine_locally(t: TStability, i: int, local: TStability) -> TStability:
    """Replace piece i by the pieces of a t-stability of that piece."""
    if not 1 <= i <= len(t):
        raise InvalidInputError(f"Piece index {i} out of range 1..{len(t)}")
    block = t.pieces[i - 1]
    make_tstability(t.n, local.pieces, ambient=block)
    pieces = t.pieces[:i - 1] + local.pieces + t.pieces[i:]
    refined = make_tstability(t.n, pieces, t.ambient())
    if not is_finer(refined, t):
        raise ConsistencyError(f"Local refinement of {t.name()} is not finer")
    return refined


def refine_to_finest(s: Sod) -> Sod:
    """Split every block along an exceptional sequence generating it."""
    witness: List[Interval] = []
    for block in s.blocks:
        seq = generating_sequence(block)
        if not seq:
            raise ConsistencyError(f"No exceptional sequence generates {block.name()}")
        witness.extend(seq)
    blocks = [ThickSubcat(s.n, frozenset([x])) for x in witness]
    refined = make_sod(s.n, blocks, s.ambient(), witness)
    if not is_finer(refined, s):
        raise ConsistencyError(f"Refinement of {s.name()} is not finer")
    return refined


def _check_index(length: int, i: int):
    if not 1 <= i <= length - 1:
        raise InvalidInputError(f"Mutation index {i} out of range 1..{length - 1}")


def rho(s: Sod, i: int, direction: str = RIGHT) -> Sod:
    """
    Right: (Pi_i, Pi_{i+1}) -> (Pi_i^perp n <Pi_i, Pi_{i+1}>, Pi_i).
    Left:  (Pi_i, Pi_{i+1}) -> (Pi_{i+1}, perp^Pi_{i+1} n <Pi_i, Pi_{i+1}>).
    """
    _check_index(len(s), i)
    first, second = s.blocks[i - 1], s.blocks[i]
    pair = _union(s.n, (first, second))
    if direction == RIGHT:
        new_pair = (perp(first, RIGHT, within=pair), first)
    elif direction == LEFT:
        new_pair = (second, perp(second, LEFT, within=pair))
    else:
        raise InvalidInputError(f"Unknown mutation direction {direction!r}")
    blocks = s.blocks[:i - 1] + new_pair + s.blocks[i + 1:]
    return make_sod(s.n, blocks, s.ambient())


def rho_tstability(t: TStability, i: int, direction: str = RIGHT) -> TStability:
    return eta_inv(rho(eta(t, t.ambient()), i, direction), t.ambient())


def sigma(f: Filtration, i: int, direction: str = RIGHT) -> Filtration:
    """
    Right: T_i -> <T_i^perp n T_{i+1}, T_{i-1}>.
    Left:  T_i -> <B, T_{i-1}> with B the left perpendicular of T_i n T_{i-1}^perp
    inside T_{i-1}^perp n T_{i+1}.
    """
    if f.side != RIGHT:
        raise InvalidInputError("sigma acts on right admissible filtrations")
    _check_index(len(f), i)
    below, current, above = f.term(i - 1), f.term(i), f.term(i + 1)
    if direction == RIGHT:
        new_term = _union(f.n, (perp(current, RIGHT, within=above), below))
    elif direction == LEFT:
        window = perp(below, RIGHT, within=above)
        middle = intersect(current, window)
        new_term = _union(f.n, (perp(middle, LEFT, within=window), below))
    else:
        raise InvalidInputError(f"Unknown mutation direction {direction!r}")
    chain = f.chain[:i - 1] + (new_term,) + f.chain[i:]
    return make_filtration(f.n, chain, RIGHT, f.chain[-1])
