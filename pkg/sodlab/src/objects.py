"""
Interval modules and formal objects of D^b(mod A_n).

Every object of the derived category of a hereditary algebra is a finite
direct sum of shifted indecomposable modules, so an object is stored as a
canonical multiset of (interval, shift) terms.
"""
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from src.core_lattice import K0Class
from src.errors import InvalidInputError

_TOKEN_RE = re.compile(r"^(?:(?P<kind>[PSI])(?P<idx>\d+)|\[(?P<a>\d+),(?P<b>\d+)\])(?:\[(?P<shift>-?\d+)\])?$")


@dataclass(frozen=True, order=True)
class Interval:
    """Interval module M[a,b]: dimension 1 at vertices a..b, identity maps between them."""

    a: int
    b: int

    def __post_init__(self):
        if not 1 <= self.a <= self.b:
            raise InvalidInputError(f"Invalid interval [{self.a},{self.b}]: need 1 <= a <= b")

    def check_rank(self, n: int) -> "Interval":
        if self.b > n:
            raise InvalidInputError(f"Interval [{self.a},{self.b}] does not fit A_{n}")
        return self

    def dimvec(self, n: int) -> Tuple[int, ...]:
        return tuple(1 if self.a <= v <= self.b else 0 for v in range(1, n + 1))

    def is_projective(self, n: int) -> bool:
        return self.b == n

    def is_injective(self) -> bool:
        return self.a == 1

    def label(self, n: int) -> str:
        """Human name: S_i for simples, P_i = [i,n], I_i = [1,i], otherwise [a,b]."""
        if self.a == self.b:
            return f"S{self.a}"
        if self.b == n:
            return f"P{self.a}"
        if self.a == 1:
            return f"I{self.b}"
        return f"[{self.a},{self.b}]"


def projective(n: int, i: int) -> Interval:
    return Interval(i, n).check_rank(n)


def injective(n: int, i: int) -> Interval:
    return Interval(1, i).check_rank(n)


def simple(n: int, i: int) -> Interval:
    return Interval(i, i).check_rank(n)


@dataclass(frozen=True)
class DerivedObject:
    """Formal direct sum of shifted interval modules over A_n, in canonical order."""

    n: int
    terms: Tuple[Tuple[Interval, int], ...] = ()

    @classmethod
    def build(cls, n: int, terms: Iterable[Tuple[Interval, int]]) -> "DerivedObject":
        checked = [(iv.check_rank(n), int(s)) for iv, s in terms]
        checked.sort(key=lambda t: (t[1], t[0].a, t[0].b))
        return cls(n, tuple(checked))

    @classmethod
    def zero(cls, n: int) -> "DerivedObject":
        return cls(n, ())

    @classmethod
    def module(cls, n: int, iv: Interval, shift: int = 0) -> "DerivedObject":
        return cls.build(n, [(iv, shift)])

    def is_zero(self) -> bool:
        return not self.terms

    def is_indecomposable(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other: "DerivedObject") -> "DerivedObject":
        if other.n != self.n:
            raise InvalidInputError(f"Objects over A_{self.n} and A_{other.n} cannot be added")
        return DerivedObject.build(self.n, self.terms + other.terms)

    def shift(self, s: int) -> "DerivedObject":
        """X[s]."""
        return DerivedObject.build(self.n, [(iv, t + s) for iv, t in self.terms])

    def multiplicities(self) -> Counter:
        return Counter(self.terms)

    def intervals(self) -> frozenset:
        """Indecomposable summands with shifts dropped."""
        return frozenset(iv for iv, _ in self.terms)

    def k0_class(self) -> K0Class:
        coords = [0] * self.n
        for iv, s in self.terms:
            sign = -1 if s % 2 else 1
            for v in range(iv.a, iv.b + 1):
                coords[v - 1] += sign
        return K0Class(tuple(coords))

    def normalized(self) -> "DerivedObject":
        """Single indecomposable moved to shift 0."""
        if not self.is_indecomposable():
            raise InvalidInputError(f"Cannot shift-normalize {self.name()}: not indecomposable")
        return DerivedObject.module(self.n, self.terms[0][0])

    def name(self) -> str:
        if self.is_zero():
            return "0"
        return "+".join(term_name(iv, s, self.n) for iv, s in self.terms)

    def __str__(self) -> str:
        return self.name()


def term_name(iv: Interval, shift: int, n: int) -> str:
    base = iv.label(n)
    return base if shift == 0 else f"{base}[{shift}]"


def parse_interval(n: int, token: str) -> Tuple[Interval, int]:
    """Parse one token such as 'P1', 'I2[-1]', 'S3' or '[2,3][1]'."""
    match = _TOKEN_RE.match(token.strip())
    if not match:
        raise InvalidInputError(f"Malformed object token {token!r}")
    if match.group("kind"):
        i = int(match.group("idx"))
        if not 1 <= i <= n:
            raise InvalidInputError(f"Index {i} out of range for A_{n} in {token!r}")
        kind = match.group("kind")
        if kind == "P":
            iv = projective(n, i)
        elif kind == "I":
            iv = injective(n, i)
        else:
            iv = simple(n, i)
    else:
        iv = Interval(int(match.group("a")), int(match.group("b"))).check_rank(n)
    shift = int(match.group("shift") or 0)
    return iv, shift


def split_top_level(text: str, sep: str) -> List[str]:
    """Split on sep outside of square brackets and parentheses ('[2,3]' stays whole)."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_object(n: int, text: str) -> DerivedObject:
    """Parse '+'-joined tokens into a DerivedObject; '0' is the zero object."""
    text = text.strip()
    if text in ("", "0"):
        return DerivedObject.zero(n)
    return DerivedObject.build(n, [parse_interval(n, tok) for tok in split_top_level(text, "+")])


def parse_intervals(n: int, text: str) -> List[Interval]:
    """Comma separated tokens, shifts ignored."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return [parse_interval(n, tok)[0] for tok in split_top_level(text, ",")]
