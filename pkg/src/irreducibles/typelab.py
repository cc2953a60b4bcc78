"""Types over a class ordering: principality, subtypes, irreducible types,
the Davenport constant and maximal types.

A type is a tuple ``t`` of nonnegative integers with ``t[i]`` the count
attached to position ``i + 1`` of a :class:`ClassOrdering`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import HasPrincipalSubtype
from .groups import ClassOrdering, Element, FiniteAbelianGroup, canonical_ordering

TypeVec = tuple


def length(t: Sequence[int]) -> int:
    return sum(t)


def zero_type(ordering: ClassOrdering) -> TypeVec:
    return (0,) * ordering.h


def class_sum(ordering: ClassOrdering, t: Sequence[int]) -> Element:
    G = ordering.group
    total = [0] * G.rank
    for count, g in zip(t, ordering.classes):
        if count:
            for k, (a, d) in enumerate(zip(g, G.invariant_factors)):
                total[k] = (total[k] + count * a) % d
    return tuple(total)


def is_principal(ordering: ClassOrdering, t: Sequence[int]) -> bool:
    return not any(class_sum(ordering, t))


def is_subtype(sub: Sequence[int], t: Sequence[int]) -> bool:
    """``sub`` is componentwise at most ``t``."""
    return len(sub) == len(t) and all(a <= b for a, b in zip(sub, t))


def _proper_nonzero_subtypes(t: Sequence[int]):
    t = tuple(t)
    for s in itertools.product(*(range(x + 1) for x in t)):
        if any(s) and s != t:
            yield s


def is_irreducible_type(ordering: ClassOrdering, t: Sequence[int]) -> bool:
    """Direct definition: principal, nonzero, and no proper nonzero principal subtype.

    Scans the whole subtype lattice; intended for small types and as a check
    on the enumeration below.
    """
    if not any(t) or not is_principal(ordering, t):
        return False
    return not any(is_principal(ordering, s) for s in _proper_nonzero_subtypes(t))


def _shift(ordering: ClassOrdering, mask: int, g: int) -> int:
    row = ordering.add_table[g]
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << row[low.bit_length() - 1]
        mask ^= low
    return out


def has_nonzero_principal_subtype(ordering: ClassOrdering, t: Sequence[int]) -> bool:
    """True iff some nonzero subtype of ``t`` has trivial class sum."""
    zero = ordering.index0(ordering.group.identity)
    sums = 0
    for i, count in enumerate(t):
        for _ in range(count):
            if sums >> ordering.neg_table[i] & 1 or i == zero:
                return True
            sums |= _shift(ordering, sums, i) | (1 << i)
    return False


@dataclass(frozen=True)
class DavenportResult:
    D: int
    witness: tuple[Element, ...]


class _Shifter:
    """Translate a set of group elements, stored as a bitmask over mixed-radix
    indices, by a fixed element: one masked bit rotation per coordinate."""

    def __init__(self, G: FiniteAbelianGroup):
        self.G = G
        self.h = G.order
        self.full = (1 << self.h) - 1
        # stride of coordinate k in the mixed-radix index
        self.strides = []
        s = 1
        for d in reversed(G.invariant_factors):
            self.strides.append(s)
            s *= d
        self.strides.reverse()
        self._masks = {}
        for k, d in enumerate(G.invariant_factors):
            st = self.strides[k]
            for a in range(1, d):
                keep = 0  # positions whose k-th coordinate stays below d after adding a
                for idx in range(self.h):
                    if (idx // st) % d < d - a:
                        keep |= 1 << idx
                self._masks[k, a] = keep

    def index(self, g: Sequence[int]) -> int:
        return sum(a * st for a, st in zip(g, self.strides))

    def shift(self, mask: int, g: Sequence[int]) -> int:
        for k, a in enumerate(g):
            if a:
                st = self.strides[k]
                d = self.G.invariant_factors[k]
                keep = self._masks[k, a]
                mask = ((mask & keep) << (a * st)) | ((mask & ~keep & self.full) >> ((d - a) * st))
        return mask


def _longest_zero_sum_free(G: FiniteAbelianGroup) -> list[Element]:
    """Longest sequence with no nonempty zero-sum subsequence.

    Depth-first search on the set of subsequence sums; that set alone decides
    which elements may still be appended, so states are memoised by it.
    Appending to a zero-sum-free sequence grows the sum set by at least one,
    which bounds the remaining depth by ``h - 1 - |sums|``.
    """
    h = G.order
    sh = _Shifter(G)
    elems = [g for g in G.elements() if any(g)]
    elems.sort(key=lambda g: (-G.element_order(g), g))
    cands = [(g, 1 << sh.index(g), 1 << sh.index(G.inverse(g))) for g in elems]

    best: list[Element] = []
    seen: dict[int, int] = {}
    stack: list[Element] = []

    def dfs(mask: int, size: int):
        nonlocal best
        depth = len(stack)
        if depth > len(best):
            best = list(stack)
        if depth + (h - 1 - size) <= len(best):
            return
        for g, bit, negbit in cands:
            if mask & negbit:
                continue
            new = mask | sh.shift(mask, g) | bit
            if seen.get(new, -1) >= depth + 1:
                continue
            seen[new] = depth + 1
            stack.append(g)
            dfs(new, bin(new).count("1"))
            stack.pop()

    dfs(0, 0)
    return best


def davenport(G: FiniteAbelianGroup) -> DavenportResult:
    """Davenport constant by exhaustive search, with a minimal zero-sum witness."""
    free = _longest_zero_sum_free(G)
    total = G.identity
    for g in free:
        total = G.add(total, g)
    witness = tuple(free) + (G.inverse(total),)
    return DavenportResult(len(witness), witness)


def _counts(h: int, indices) -> TypeVec:
    t = [0] * h
    for i in indices:
        t[i] += 1
    return tuple(t)


def sequence_type(ordering: ClassOrdering, seq: Sequence[Element]) -> TypeVec:
    return _counts(ordering.h, (ordering.index0(g) for g in seq))


@dataclass(frozen=True)
class TypeSet:
    ordering: ClassOrdering
    types: tuple[TypeVec, ...]
    kind: str
    tau_prime: Optional[TypeVec] = None

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(sorted(set(map(tuple, self.types)))))

    def __iter__(self):
        return iter(self.types)

    def __len__(self):
        return len(self.types)

    def __contains__(self, t):
        return tuple(t) in set(self.types)

    def lengths(self) -> list[int]:
        return sorted(sum(t) for t in self.types)

    def to_json(self) -> list[list[int]]:
        return [list(t) for t in self.types]


@lru_cache(maxsize=None)
def _irreducible_types(ordering: ClassOrdering) -> tuple[TypeVec, ...]:
    h = ordering.h
    zero = ordering.index0(ordering.group.identity)
    neg = ordering.neg_table
    nonzero = [i for i in range(h) if i != zero]
    out: list[TypeVec] = []
    counts = [0] * h
    # running class sum of the current zero-sum-free multiset, as an index
    add = ordering.add_table

    def dfs(mask: int, total: int, start: int):
        closing = neg[total]
        if closing >= start or not any(counts):
            counts[closing] += 1
            out.append(tuple(counts))
            counts[closing] -= 1
        for pos in range(len(nonzero)):
            g = nonzero[pos]
            if g < start or mask >> neg[g] & 1:
                continue
            new = mask | _shift(ordering, mask, g) | (1 << g)
            counts[g] += 1
            dfs(new, add[total][g], g)
            counts[g] -= 1

    dfs(0, zero, 0)
    return tuple(sorted(set(out)))


def enumerate_irreducible_types(ordering: ClassOrdering) -> TypeSet:
    """Every irreducible type: a minimal zero-sum sequence is a zero-sum-free
    sequence closed off by the inverse of its sum. Each is produced once by
    closing with an element of index at least every index already used."""
    return TypeSet(ordering, _irreducible_types(ordering), "irreducible")


def davenport_of_ordering(ordering: ClassOrdering) -> int:
    return max(sum(t) for t in _irreducible_types(ordering))


def maximal_types(ordering: ClassOrdering) -> TypeSet:
    types = _irreducible_types(ordering)
    D = max(sum(t) for t in types)
    return TypeSet(ordering, [t for t in types if sum(t) == D], "maximal")


def extend_to_irreducible(ordering: ClassOrdering, sub: Sequence[int]) -> TypeVec:
    """An irreducible type containing ``sub``: ``sub`` itself if irreducible,
    otherwise ``sub`` plus one copy of the inverse of its class sum."""
    sub = tuple(sub)
    if has_nonzero_principal_subtype(ordering, sub):
        if is_irreducible_type(ordering, sub):
            return sub
        raise HasPrincipalSubtype(f"{sub} has a nonzero principal subtype")
    total = class_sum(ordering, sub)
    j = ordering.index0(ordering.group.inverse(total))
    out = list(sub)
    out[j] += 1
    return tuple(out)


def types_maximal_wrt(ordering: ClassOrdering, sub: Sequence[int]) -> tuple[TypeSet, int]:
    """Irreducible types of greatest length containing ``sub``, and the common
    length of their differences with ``sub``."""
    sub = tuple(sub)
    if has_nonzero_principal_subtype(ordering, sub):
        raise HasPrincipalSubtype(f"{sub} has a nonzero principal subtype")
    containing = [t for t in _irreducible_types(ordering) if is_subtype(sub, t)]
    top = max(sum(t) for t in containing)
    best = [t for t in containing if sum(t) == top]
    return TypeSet(ordering, best, "maximal_wrt", sub), top - sum(sub)


def factorial_weight(t: Sequence[int]) -> Fraction:
    """1 / (t_1! ... t_h!) as an exact rational."""
    return Fraction(1, math.prod(math.factorial(x) for x in t))
