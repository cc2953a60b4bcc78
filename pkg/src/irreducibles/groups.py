"""Finite abelian groups in invariant-factor form.

Elements are plain tuples of residues, one per invariant factor. The
trivial group has no invariant factors and a single element ``()``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .errors import GroupMismatch, InvalidInvariants

Element = tuple


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.invariant_factors)
        for i, x in enumerate(d):
            if x < 2:
                raise InvalidInvariants(f"invariant factor {x} < 2")
            if i + 1 < len(d) and d[i + 1] % x:
                raise InvalidInvariants(f"{x} does not divide {d[i + 1]}")
        object.__setattr__(self, "invariant_factors", d)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    def is_cyclic(self) -> bool:
        return self.rank <= 1

    def elements(self) -> Iterator[Element]:
        """Mixed-radix enumeration, last coordinate varying fastest."""
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def check(self, g: Sequence[int]) -> Element:
        if len(g) != self.rank:
            raise GroupMismatch(f"element {tuple(g)} has wrong length for {self}")
        for x, d in zip(g, self.invariant_factors):
            if not 0 <= x < d:
                raise GroupMismatch(f"element {tuple(g)} not reduced for {self}")
        return tuple(g)

    def reduce(self, coords: Sequence[int]) -> Element:
        if len(coords) != self.rank:
            raise GroupMismatch(f"coordinates {tuple(coords)} have wrong length")
        return tuple(x % d for x, d in zip(coords, self.invariant_factors))

    def add(self, g: Sequence[int], g2: Sequence[int]) -> Element:
        self.check(g)
        self.check(g2)
        return tuple((a + b) % d for a, b, d in zip(g, g2, self.invariant_factors))

    def inverse(self, g: Sequence[int]) -> Element:
        self.check(g)
        return tuple(-a % d for a, d in zip(g, self.invariant_factors))

    def scalar_mul(self, n: int, g: Sequence[int]) -> Element:
        self.check(g)
        return tuple(n * a % d for a, d in zip(g, self.invariant_factors))

    def element_order(self, g: Sequence[int]) -> int:
        self.check(g)
        n = 1
        for a, d in zip(g, self.invariant_factors):
            n = math.lcm(n, d // math.gcd(a, d))
        return n

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors)}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteAbelianGroup":
        return make_group(obj["invariant_factors"])

    def __str__(self):
        if not self.invariant_factors:
            return "1"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


def make_group(invariant_factors: Sequence[int]) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(tuple(invariant_factors))


def cyclic(n: int) -> FiniteAbelianGroup:
    return make_group([] if n == 1 else [n])


def groups_of_order(n: int) -> list[FiniteAbelianGroup]:
    """All abelian groups of order ``n`` up to isomorphism."""

    def chains(rest: int, lo: int):
        if rest == 1:
            yield []
            return
        for d in range(max(lo, 2), rest + 1):
            if rest % d == 0 and d % lo == 0:
                for tail in chains(rest // d, d):
                    yield [d] + tail

    return sorted(
        (make_group(c) for c in chains(n, 1)),
        key=lambda g: (g.rank, g.invariant_factors),
    )


@dataclass(frozen=True)
class ClassOrdering:
    """A fixed listing C_1, ..., C_h of the group elements (1-based positions)."""

    group: FiniteAbelianGroup
    classes: tuple[Element, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        classes = tuple(tuple(c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        if len(classes) != self.group.order or set(classes) != set(self.group.elements()):
            raise GroupMismatch("ordering is not a bijection onto the group")
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(classes)})

    @property
    def h(self) -> int:
        return len(self.classes)

    def position(self, g: Sequence[int]) -> int:
        """1-based position of ``g``."""
        return self._index[tuple(g)] + 1

    def index0(self, g: Sequence[int]) -> int:
        return self._index[tuple(g)]

    def element(self, position: int) -> Element:
        return self.classes[position - 1]

    @property
    def identity_position(self) -> int:
        return self.position(self.group.identity)

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        """0-based index table: ``add_table[i][j]`` is the index of C_i + C_j."""
        G = self.group
        return tuple(
            tuple(self._index[G.add(a, b)] for b in self.classes) for a in self.classes
        )

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        return tuple(self._index[self.group.inverse(a)] for a in self.classes)

    def permuted(self, perm: Sequence[int]) -> "ClassOrdering":
        """Reorder so that new position i holds old position ``perm[i]`` (0-based)."""
        return ClassOrdering(self.group, tuple(self.classes[p] for p in perm))


def canonical_ordering(G: FiniteAbelianGroup) -> ClassOrdering:
    """Mixed-radix order with the identity rotated to the last position.

    For Z/h this gives C_i <-> i mod h.
    """
    elems = list(G.elements())
    return ClassOrdering(G, tuple(elems[1:] + elems[:1]))
