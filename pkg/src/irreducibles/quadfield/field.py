"""Imaginary quadratic fields: elements, ideals in Hermite normal form,
prime splitting, factorisation and ideal classes.

Elements are written ``x + y*omega`` with omega = (1 + sqrt d)/2 when
d = 1 (mod 4) and omega = sqrt d otherwise. An ideal is stored as the
Hermite normal form triple (a, b, c) of its lattice aZ + (b + c*omega)Z.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from ..errors import (
    FactorizationOverflow,
    GroupMismatch,
    NotImaginary,
    NotPrime,
    NotSquarefree,
    ZeroIdeal,
)
from ..groups import ClassOrdering, FiniteAbelianGroup, canonical_ordering, groups_of_order
from .forms import Form, compose, principal_form, reduce_form, reduced_forms

NORM_CAP = 2**62


@dataclass(frozen=True)
class QIInteger:
    x: int
    y: int

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "basis": "omega"}


@dataclass(frozen=True, order=True)
class QIIdeal:
    a: int
    b: int
    c: int

    @property
    def norm(self) -> int:
        return self.a * self.c

    def is_unit(self) -> bool:
        return self.a == 1 and self.c == 1

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}


UNIT_IDEAL = QIIdeal(1, 0, 1)


@dataclass(frozen=True)
class PrimeIdealRec:
    p: int
    kind: str  # "split", "ramified" or "inert"
    ideal: QIIdeal
    norm: int
    class_index: int  # 1-based position in the field's class ordering
    conjugate_hint: Optional[QIIdeal] = None

    @property
    def ramification(self) -> int:
        return 2 if self.kind == "ramified" else 1

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "kind": self.kind,
            "ideal": self.ideal.to_json(),
            "norm": self.norm,
            "class_index": self.class_index,
        }


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def hnf(vectors: Iterable[tuple[int, int]]) -> QIIdeal:
    """Hermite normal form of the full-rank lattice spanned by ``vectors``."""
    a = 0
    pivot = None
    for x, y in vectors:
        if y == 0:
            a = math.gcd(a, x)
            continue
        if pivot is None:
            pivot = (x, y) if y > 0 else (-x, -y)
            continue
        x0, y0 = pivot
        g, u, v = _xgcd(y0, y)
        a = math.gcd(a, (y // g) * x0 - (y0 // g) * x)
        pivot = (u * x0 + v * x, g)
    if pivot is None or a == 0:
        raise ZeroIdeal("lattice is not of full rank")
    x0, c = pivot
    return QIIdeal(a, x0 % a, c)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        a, u0, v0 = -a, -u0, -v0
    return a, u0, v0


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


class QuadField:
    """Q(sqrt d) for squarefree d < 0, with its class group.

    Construct with :func:`make_field`.
    """

    def __init__(self, d: int, anchor: Optional[QIIdeal] = None):
        if d >= 0:
            raise NotImaginary(f"d={d} is not negative")
        if not _squarefree(d):
            raise NotSquarefree(f"d={d} is not squarefree")
        self.d = d
        if d % 4 == 1:
            self.disc = d
            self.t, self.n = 1, (1 - d) // 4  # omega^2 = t*omega - n
        else:
            self.disc = 4 * d
            self.t, self.n = 0, -d
        self.w = {-1: 4, -3: 6}.get(d, 2)
        units = [(1, 0), (-1, 0)]
        if d == -1:
            units += [(0, 1), (0, -1)]
        elif d == -3:
            units += [(0, 1), (0, -1), (-1, 1), (1, -1)]
        self.units = tuple(QIInteger(*u) for u in units)
        self._build_class_group(anchor)

    # -- class group ---------------------------------------------------

    def _build_class_group(self, anchor: Optional[QIIdeal]):
        forms = reduced_forms(self.disc)
        h = len(forms)
        pos = {f: i for i, f in enumerate(forms)}
        table = [[pos[compose(f, g)] for g in forms] for f in forms]
        ident = pos[principal_form(self.disc)]

        def order(i: int) -> int:
            k, j = 1, i
            while j != ident:
                j = table[j][i]
                k += 1
            return k

        orders = [order(i) for i in range(h)]
        hist = sorted(orders)
        group = None
        for G in groups_of_order(h):
            if sorted(G.element_order(g) for g in G.elements()) == hist:
                group = G
                break
        assert group is not None
        factors = group.invariant_factors
        k = len(factors)

        def span(gens: Sequence[int], exps: Sequence[int]) -> set[int]:
            reached = {ident}
            for g, e in zip(gens, exps):
                new = set()
                for r in reached:
                    j = r
                    for _ in range(e):
                        new.add(j)
                        j = table[j][g]
                reached = new
            return reached

        anchor_idx = None
        if anchor is not None:
            anchor_idx = pos[self.ideal_form(anchor)]
            if k and orders[anchor_idx] != factors[-1]:
                raise GroupMismatch("anchor class does not have maximal order")

        # basis[i] generates the i-th invariant factor; chosen from the top down
        basis: list[Optional[int]] = [None] * k

        def search(level: int) -> bool:
            if level < 0:
                return True
            chosen = [basis[j] for j in range(level + 1, k)]
            chosen_exps = [factors[j] for j in range(level + 1, k)]
            options = range(h)
            if level == k - 1 and anchor_idx is not None:
                options = [anchor_idx]
            for cand in options:
                if orders[cand] != factors[level]:
                    continue
                if len(span(chosen + [cand], chosen_exps + [factors[level]])) != math.prod(
                    chosen_exps
                ) * factors[level]:
                    continue
                basis[level] = cand
                if search(level - 1):
                    return True
            basis[level] = None
            return False

        if not search(k - 1):
            raise GroupMismatch("could not find a basis for the class group")

        def element_to_form(g: Sequence[int]) -> int:
            j = ident
            for b, e in zip(basis, g):
                for _ in range(e):
                    j = table[j][b]
            return j

        self.class_group: FiniteAbelianGroup = group
        self.ordering: ClassOrdering = canonical_ordering(group)
        self.class_forms: tuple[Form, ...] = tuple(
            forms[element_to_form(g)] for g in self.ordering.classes
        )
        self._form_position = {f: i + 1 for i, f in enumerate(self.class_forms)}
        if len(self._form_position) != h:
            raise GroupMismatch("class-group isomorphism is not bijective")

    @property
    def h(self) -> int:
        return self.class_group.order

    # -- elements ------------------------------------------------------

    def mul(self, u: QIInteger, v: QIInteger) -> QIInteger:
        return QIInteger(u.x * v.x - self.n * u.y * v.y, u.x * v.y + u.y * v.x + self.t * u.y * v.y)

    def conj(self, u: QIInteger) -> QIInteger:
        return QIInteger(u.x + self.t * u.y, -u.y)

    def sub(self, u: QIInteger, v: QIInteger) -> QIInteger:
        return QIInteger(u.x - v.x, u.y - v.y)

    def element_norm(self, u: QIInteger) -> int:
        return u.x * u.x + self.t * u.x * u.y + self.n * u.y * u.y

    def from_half(self, x: int, y: int) -> QIInteger:
        """The element (x + y*sqrt d)/2, which must be integral."""
        if self.t == 1:
            # (x + y sqrt d)/2 = (x - y)/2 + y*omega
            if (x - y) % 2:
                raise ValueError(f"({x} + {y}*sqrt({self.d}))/2 is not integral")
            return QIInteger((x - y) // 2, y)
        if x % 2 or y % 2:
            raise ValueError(f"({x} + {y}*sqrt({self.d}))/2 is not integral")
        return QIInteger(x // 2, y // 2)

    def associate_key(self, u: QIInteger) -> tuple[int, int]:
        return min((v.x, v.y) for v in (self.mul(e, u) for e in self.units))

    def elements_of_norm_upto(self, X: int) -> Iterator[QIInteger]:
        """All nonzero elements with norm at most X."""
        # 4 N(x + y omega) = (2x + t y)^2 + |disc| y^2
        ymax = math.isqrt(4 * X // -self.disc)
        for y in range(-ymax, ymax + 1):
            rest = 4 * X + self.disc * y * y
            if rest < 0:
                continue
            s = math.isqrt(rest)
            lo = -((s + self.t * y) // 2)
            hi = (s - self.t * y) // 2
            for x in range(lo, hi + 1):
                if x or y:
                    yield QIInteger(x, y)

    # -- ideals --------------------------------------------------------

    def principal(self, u: QIInteger | int) -> QIIdeal:
        if isinstance(u, int):
            u = QIInteger(u, 0)
        if u.x == 0 and u.y == 0:
            raise ZeroIdeal("the zero element generates the zero ideal")
        v = self.mul(u, QIInteger(0, 1))
        return hnf([(u.x, u.y), (v.x, v.y)])

    def generators(self, I: QIIdeal) -> tuple[QIInteger, QIInteger]:
        return QIInteger(I.a, 0), QIInteger(I.b, I.c)

    def contains(self, I: QIIdeal, u: QIInteger) -> bool:
        if u.y % I.c:
            return False
        return (u.x - (u.y // I.c) * I.b) % I.a == 0

    def is_ideal(self, I: QIIdeal) -> bool:
        if I.a <= 0 or I.c <= 0 or not 0 <= I.b < I.a:
            return False
        omega = QIInteger(0, 1)
        return all(self.contains(I, self.mul(g, omega)) for g in self.generators(I))

    def multiply(self, I: QIIdeal, J: QIIdeal) -> QIIdeal:
        vecs = []
        for g in self.generators(I):
            for k in self.generators(J):
                p = self.mul(g, k)
                vecs.append((p.x, p.y))
        return hnf(vecs)

    def power(self, I: QIIdeal, e: int) -> QIIdeal:
        out = UNIT_IDEAL
        for _ in range(e):
            out = self.multiply(out, I)
        return out

    def conjugate(self, I: QIIdeal) -> QIIdeal:
        return hnf([(I.a, 0), (I.b + self.t * I.c, -I.c)])

    def divides(self, I: QIIdeal, J: QIIdeal) -> bool:
        """True iff I divides J, i.e. J is contained in I."""
        return all(self.contains(I, g) for g in self.generators(J))

    def gcd_ideal(self, I: QIIdeal, J: QIIdeal) -> QIIdeal:
        return hnf([(I.a, 0), (I.b, I.c), (J.a, 0), (J.b, J.c)])

    def divide_exact(self, I: QIIdeal, J: QIIdeal) -> QIIdeal:
        """I * J^-1 for J dividing I."""
        if not self.divides(J, I):
            raise ValueError(f"{J} does not divide {I}")
        P = self.multiply(I, self.conjugate(J))
        n = J.norm
        return QIIdeal(P.a // n, P.b // n, P.c // n)

    # -- primes ---------------------------------------------------------

    def kronecker(self, p: int) -> int:
        if p == 2:
            if self.disc % 2 == 0:
                return 0
            return 1 if self.disc % 8 == 1 else -1
        r = self.disc % p
        if r == 0:
            return 0
        # Euler's criterion
        return 1 if pow(r, (p - 1) // 2, p) == 1 else -1

    @lru_cache(maxsize=None)
    def split_prime(self, p: int) -> tuple[PrimeIdealRec, ...]:
        if p < 2 or not isprime(p):
            raise NotPrime(f"{p} is not prime")
        k = self.kronecker(p)
        if k == -1:
            ideal = QIIdeal(p, 0, p)
            return (PrimeIdealRec(p, "inert", ideal, p * p, self.ideal_class(ideal)),)
        # roots of X^2 - tX + n mod p; the prime ideal is (p, omega - r)
        if p == 2:
            roots = [r for r in (0, 1) if (r * r - self.t * r + self.n) % 2 == 0]
        else:
            inv2 = pow(2, -1, p)
            roots = sorted({(self.t + s) * inv2 % p for s in sqrt_mod(self.disc % p, p, all_roots=True)})
        ideals = sorted({QIIdeal(p, (-r) % p, 1) for r in roots})
        if k == 0:
            I = ideals[0]
            return (PrimeIdealRec(p, "ramified", I, p, self.ideal_class(I)),)
        I, J = ideals
        return (
            PrimeIdealRec(p, "split", I, p, self.ideal_class(I), J),
            PrimeIdealRec(p, "split", J, p, self.ideal_class(J), I),
        )

    def prime_record(self, P: QIIdeal) -> PrimeIdealRec:
        for rec in self.split_prime(_prime_of(P)):
            if rec.ideal == P:
                return rec
        raise ValueError(f"{P} is not a prime ideal")

    def factorize(self, I: QIIdeal) -> list[tuple[PrimeIdealRec, int]]:
        """Prime ideal factorisation as (prime, exponent) pairs, ordered by (norm, HNF)."""
        if I.a <= 0 or I.c <= 0:
            raise ZeroIdeal("zero ideal")
        N = I.norm
        if N > NORM_CAP:
            raise FactorizationOverflow(f"norm {N} exceeds 2^62")
        out = []
        for p in sorted(factorint(N)):
            for rec in self.split_prime(p):
                e = 0
                while self.divides(rec.ideal, I):
                    I = self.divide_exact(I, rec.ideal)
                    e += 1
                if e:
                    out.append((rec, e))
        assert I.is_unit()
        return sorted(out, key=lambda pe: (pe[0].norm, pe[0].ideal))

    def product(self, factors: Iterable[tuple[PrimeIdealRec | QIIdeal, int]]) -> QIIdeal:
        out = UNIT_IDEAL
        for P, e in factors:
            P = P.ideal if isinstance(P, PrimeIdealRec) else P
            out = self.multiply(out, self.power(P, e))
        return out

    def valuation(self, P: PrimeIdealRec, u: QIInteger) -> int:
        """ord_P of a nonzero element."""
        J = self.principal(u)
        k = 0
        while self.divides(P.ideal, J):
            J = self.divide_exact(J, P.ideal)
            k += 1
        return k

    def enumerate_prime_ideals(self, X: int) -> Iterator[PrimeIdealRec]:
        """Every prime ideal of norm at most X, ordered by (norm, HNF)."""
        return iter(self._prime_ideals(int(X)))

    @lru_cache(maxsize=8)
    def _prime_ideals(self, X: int) -> tuple[PrimeIdealRec, ...]:
        out = []
        for p in primes_upto(X).tolist():
            for rec in self.split_prime(p):
                if rec.norm <= X:
                    out.append(rec)
        out.sort(key=lambda r: (r.norm, r.ideal))
        return tuple(out)

    # -- classes ----------------------------------------------------------

    def ideal_form(self, I: QIIdeal) -> Form:
        """Reduced form attached to the class of I."""
        A = I.a // I.c
        b = I.b // I.c
        # b + omega = (B + sqrt disc)/2
        B = 2 * b + self.t
        return reduce_form((A, -B, (B * B - self.disc) // (4 * A)))

    def ideal_class(self, I: QIIdeal) -> int:
        if I.a <= 0 or I.c <= 0:
            raise ZeroIdeal("zero ideal")
        return self._form_position[self.ideal_form(I)]

    def class_element(self, I: QIIdeal):
        return self.ordering.element(self.ideal_class(I))

    def ideal_type(self, I: QIIdeal) -> tuple[int, ...]:
        t = [0] * self.h
        for rec, e in self.factorize(I):
            t[rec.class_index - 1] += e
        return tuple(t)

    def type_of_factors(self, factors: Iterable[tuple[PrimeIdealRec, int]]) -> tuple[int, ...]:
        t = [0] * self.h
        for rec, e in factors:
            t[rec.class_index - 1] += e
        return tuple(t)

    def omega_by_class(self, I: QIIdeal) -> tuple[int, ...]:
        t = [0] * self.h
        for rec, _ in self.factorize(I):
            t[rec.class_index - 1] += 1
        return tuple(t)

    def is_principal_with_generator(self, I: QIIdeal) -> Optional[QIInteger]:
        """A generator of I if I is principal, else None."""
        if I.a <= 0 or I.c <= 0:
            raise ZeroIdeal("zero ideal")
        N = I.norm
        absd = -self.disc
        ymax = math.isqrt(4 * N // absd)
        for y in sorted(range(-ymax, ymax + 1), key=lambda v: (abs(v), v < 0)):
            if y % I.c:
                continue
            rest = 4 * N - absd * y * y
            if rest < 0:
                continue
            s = math.isqrt(rest)
            if s * s != rest:
                continue
            for sign in (1, -1):
                twice_x = sign * s - self.t * y
                if twice_x % 2:
                    continue
                u = QIInteger(twice_x // 2, y)
                if self.contains(I, u):
                    return u
        return None

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "disc": self.disc,
            "w": self.w,
            "class_group": self.class_group.to_json(),
            "ordering": [list(g) for g in self.ordering.classes],
            "class_forms": [list(f) for f in self.class_forms],
        }

    def __repr__(self):
        return f"QuadField(d={self.d}, h={self.h})"


def _prime_of(P: QIIdeal) -> int:
    N = P.norm
    r = math.isqrt(N)
    return r if r * r == N and isprime(r) else N


@lru_cache(maxsize=None)
def make_field(d: int, anchor: Optional[QIIdeal] = None) -> QuadField:
    """Build Q(sqrt d). With ``anchor``, the class of that ideal becomes C_1."""
    return QuadField(d, anchor)
