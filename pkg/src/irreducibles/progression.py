"""Constants L and C' for counting irreducibles in a residue class, and the
resulting main term C' * x/log x * (log log x)^(L-1)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, DomainError, HasPrincipalSubtype
from .groups import ClassOrdering
from .typelab import TypeVec, factorial_weight, has_nonzero_principal_subtype, types_maximal_wrt


def rational_json(q: Fraction) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


@dataclass(frozen=True)
class ProgressionInstance:
    ordering: ClassOrdering
    tau_prime: TypeVec
    norm_g: int = 1
    phi: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "tau_prime", tuple(self.tau_prime))
        object.__setattr__(self, "phi", Fraction(self.phi))
        if len(self.tau_prime) != self.ordering.h:
            raise DimensionMismatch(f"tau' has {len(self.tau_prime)} entries, h={self.ordering.h}")
        if self.norm_g < 1:
            raise ValueError("N(g) must be a positive integer")
        if self.phi <= 0:
            raise ValueError("Phi must be positive")

    def to_json(self) -> dict:
        return {
            "tau_prime": list(self.tau_prime),
            "norm_g": self.norm_g,
            "phi": rational_json(self.phi),
        }


@dataclass(frozen=True)
class ProgressionConstants:
    L: int
    type_sum: Fraction
    C_prime: Fraction

    def to_json(self) -> dict:
        return {"C_prime": rational_json(self.C_prime), "L": self.L}

    def to_json_full(self) -> dict:
        return {
            "C_prime": rational_json(self.C_prime),
            "L": self.L,
            "type_sum": rational_json(self.type_sum),
        }


def is_weakly_coprime_type(ordering: ClassOrdering, tau_prime: Sequence[int]) -> bool:
    """No nonzero subtype of tau' is principal."""
    return not has_nonzero_principal_subtype(ordering, tau_prime)


def progression_constants(inst: ProgressionInstance) -> ProgressionConstants:
    if not is_weakly_coprime_type(inst.ordering, inst.tau_prime):
        raise HasPrincipalSubtype(f"{inst.tau_prime} has a nonzero principal subtype")
    T, L = types_maximal_wrt(inst.ordering, inst.tau_prime)
    type_sum = sum(
        (factorial_weight([a - b for a, b in zip(t, inst.tau_prime)]) for t in T), Fraction(0)
    )
    h = inst.ordering.h
    C = Fraction(L, h**L) * type_sum / (inst.norm_g * inst.phi)
    return ProgressionConstants(L, type_sum, C)


def predicted_progression_count(c: ProgressionConstants, x: float) -> float:
    if not x > math.exp(math.e):
        raise DomainError("predicted count needs x > e^e")
    lx = math.log(x)
    return float(c.C_prime) * x / lx * math.log(lx) ** (c.L - 1)
