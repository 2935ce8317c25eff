"""
Harder-Narasimhan filtrations for finite t-stabilities on D^b(mod A_n).

The t-stability is refined to a finest one whose pieces are generated by an
exceptional sequence (E_1, ..., E_m) ordered from the lowest phase up. The
lowest factor is split off with the coevaluation triangle

    R -> X -> Hom*(X, E_1)^* (x) E_1

and the construction recurses on R. Fine factors belonging to one coarse piece
are glued back together by taking the cone of the composite map between the
corresponding remainders.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.complexes import ChainMap, compose, decompose, fiber, hom_basis, identity, mapping_cone, present, vstack_maps
from src.errors import ConsistencyError, InvalidInputError
from src.objects import DerivedObject, Interval
from src.sod_tstab import TStability, eta, refine_to_finest
from src.typea_engine import graded_hom_vanishes, hom_degrees, thick_closure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HNFactor:
    obj: DerivedObject
    phase: int

    def name(self) -> str:
        return f"{self.obj.name()}@{self.phase}"


@dataclass(frozen=True)
class HNResult:
    """Factors listed top-down: the first one is the subobject of highest phase."""

    obj: DerivedObject
    factors: Tuple[HNFactor, ...]

    @property
    def phi_plus(self) -> int:
        return self.factors[0].phase

    @property
    def phi_minus(self) -> int:
        return self.factors[-1].phase

    def is_semistable(self) -> bool:
        return len(self.factors) == 1

    def summary(self) -> str:
        return "[" + ", ".join(f.name() for f in self.factors) + "]"

    def __str__(self) -> str:
        return self.summary()


def _check_object(t: TStability, X: DerivedObject):
    if X.is_zero():
        raise InvalidInputError("HN filtration of the zero object is undefined")
    if X.n != t.n:
        raise InvalidInputError(f"Object over A_{X.n} and t-stability over A_{t.n}")
    if not X.intervals() <= t.ambient().members:
        raise InvalidInputError(f"{X.name()} does not lie in the category of {t.name()}")


def _fine_witness(t: TStability, witness: Optional[Sequence[Interval]]) -> List[Tuple[Interval, int]]:
    """Exceptional objects ordered by phase, tagged with the coarse phase containing them."""
    if witness is None:
        witness = refine_to_finest(eta(t, t.ambient())).witness
    tagged = []
    for x in witness:
        phase = t.piece_of(x)
        if phase is None:
            raise InvalidInputError(f"Witness object {x.label(t.n)} lies in no piece of {t.name()}")
        tagged.append((x, phase))
    phases = [p for _, p in tagged]
    if phases != sorted(phases):
        raise InvalidInputError("Witness sequence is not ordered by phase")
    for j in range(len(witness)):
        for i in range(j):
            if not graded_hom_vanishes(t.n, witness[j], witness[i]):
                raise InvalidInputError("Witness is not an exceptional sequence")
    for phase, piece in zip(t.phases, t.pieces):
        gens = [x for x, p in tagged if p == phase]
        if not gens or thick_closure(gens, t.n).members != piece.members:
            raise InvalidInputError(f"Witness objects of phase {phase} do not generate that piece of {t.name()}")
    return tagged


def hn_filtration(t: TStability, X: DerivedObject, witness: Optional[Sequence[Interval]] = None) -> HNResult:
    """HN factors of X with respect to t, highest phase first."""
    _check_object(t, X)
    fine = _fine_witness(t, witness)

    current = present(X)
    steps: List[Tuple[int, DerivedObject, ChainMap]] = []
    for e, phase in fine:
        E = DerivedObject.module(t.n, e)
        degrees = hom_degrees(decompose(current), E)
        if not degrees:
            steps.append((phase, DerivedObject.zero(t.n), identity(current)))
            continue
        target = present(E)
        maps = []
        for k in degrees:
            maps.extend(hom_basis(current, target, k))
        coevaluation = vstack_maps(maps)
        factor = decompose(coevaluation.target)
        current, projection = fiber(coevaluation)
        steps.append((phase, factor, projection))
    if not decompose(current).is_zero():
        raise ConsistencyError(f"HN remainder of {X.name()} is {decompose(current).name()}, not zero")

    factors: List[HNFactor] = []
    start = 0
    while start < len(steps):
        phase = steps[start][0]
        end = start
        while end + 1 < len(steps) and steps[end + 1][0] == phase:
            end += 1
        nonzero = [s for s in steps[start:end + 1] if not s[1].is_zero()]
        if len(nonzero) == 1:
            factors.append(HNFactor(nonzero[0][1], phase))
        elif nonzero:
            composite = steps[end][2]
            for _, _, projection in reversed(steps[start:end]):
                composite = compose(projection, composite)
            factors.append(HNFactor(decompose(mapping_cone(composite)), phase))
        start = end + 1

    factors.reverse()
    result = HNResult(X, tuple(f for f in factors if not f.obj.is_zero()))
    _verify(t, result)
    logger.debug(f"HN of {X.name()} w.r.t. {t.name()}: {result.summary()}")
    return result


def _verify(t: TStability, result: HNResult):
    if not result.factors:
        raise ConsistencyError(f"No HN factors for {result.obj.name()}")
    total = None
    for f in result.factors:
        if not f.obj.intervals() <= t.pieces[f.phase - 1].members:
            raise ConsistencyError(f"Factor {f.name()} is not in piece {f.phase}")
        total = f.obj.k0_class() if total is None else total + f.obj.k0_class()
    if total != result.obj.k0_class():
        raise ConsistencyError(f"HN factors of {result.obj.name()} do not add up in K0")
    phases = [f.phase for f in result.factors]
    if any(a <= b for a, b in zip(phases, phases[1:])):
        raise ConsistencyError(f"HN phases {phases} are not strictly decreasing")


def hn_phases(t: TStability, X: DerivedObject) -> Tuple[int, int]:
    """(phi_plus, phi_minus) of X."""
    result = hn_filtration(t, X)
    return result.phi_plus, result.phi_minus


def normalize_tower(t: TStability, X: DerivedObject, factors: Sequence[Tuple[DerivedObject, int]]) -> HNResult:
    """
    Turn a tower of semistable factors (listed top-down) into the HN tower.

    The factors are validated against t and X but carry no maps, so merging
    equal phases and swapping misordered neighbours cannot see how they glue.
    The gluing is read off X instead: the result is hn_filtration(t, X), and
    the input is logged when it was not already the HN tower.
    """
    _check_object(t, X)
    tower = [HNFactor(obj, phase) for obj, phase in factors]
    if not tower:
        raise InvalidInputError("Empty tower")
    total = None
    for f in tower:
        if f.phase not in t.phases:
            raise InvalidInputError(f"Phase {f.phase} outside 1..{len(t)}")
        if f.obj.is_zero() or not f.obj.intervals() <= t.pieces[f.phase - 1].members:
            raise InvalidInputError(f"Factor {f.name()} is not a nonzero object of piece {f.phase}")
        total = f.obj.k0_class() if total is None else total + f.obj.k0_class()
    if total != X.k0_class():
        raise InvalidInputError(f"Factors do not recompose {X.name()} in K0")

    result = hn_filtration(t, X)
    if tuple(tower) != result.factors:
        logger.info(f"Tower {HNResult(X, tuple(tower)).summary()} of {X.name()} normalized to {result.summary()}")
    return result
