"""Irreducible divisors, strict ray classes and progression counts in an
imaginary quadratic field.

Two independent routes count irreducible elements in a residue class:
a direct scan of lattice points, and an enumeration of cofactor ideals
filtered by type and ray class.
"""

from __future__ import annotations

import bisect
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from ..errors import DivisorExplosion, NotCoprimeToModulus, ScanTooLarge, ZeroIdeal
from ..typelab import TypeVec, _irreducible_types, is_irreducible_type, is_subtype
from .field import UNIT_IDEAL, PrimeIdealRec, QIIdeal, QIInteger, QuadField

SCAN_CAP = 10**7
DIVISOR_CAP = 10**7


# -- irreducible divisors ----------------------------------------------------


def _divisor_lattice(K: QuadField, I: QIIdeal):
    """Factorisation of I and, per divisor in mixed-radix order, its class index."""
    factors = K.factorize(I)
    sizes = [e + 1 for _, e in factors]
    nodes = math.prod(sizes)
    if nodes > DIVISOR_CAP:
        raise DivisorExplosion(f"divisor lattice has {nodes} nodes")
    return factors, sizes, nodes


def irreducible_divisor_types(K: QuadField, I: QIIdeal) -> Counter:
    """Types of the principal divisors of I that are minimal among nonunit
    principal divisors, tallied. Brute force over the divisor lattice."""
    factors, sizes, nodes = _divisor_lattice(K, I)
    add = K.ordering.add_table
    zero = K.ordering.index0(K.ordering.group.identity)
    cls = [rec.class_index - 1 for rec, _ in factors]
    strides = [1] * len(sizes)
    for j in range(len(sizes) - 2, -1, -1):
        strides[j] = strides[j + 1] * sizes[j + 1]

    klass = [zero] * nodes
    principal = [False] * nodes
    # below[n]: some nonunit principal divisor lies strictly below divisor n
    below = [False] * nodes
    tally: Counter = Counter()
    exps = [0] * len(sizes)
    for n in range(nodes):
        if n:
            # exps is the mixed-radix digit vector of n
            j = len(sizes) - 1
            while exps[j] + 1 == sizes[j]:
                exps[j] = 0
                j -= 1
            exps[j] += 1
        lower = [n - strides[j] for j in range(len(sizes)) if exps[j]]
        if lower:
            j0 = next(j for j in range(len(sizes)) if exps[j])
            klass[n] = add[klass[n - strides[j0]]][cls[j0]]
        principal[n] = klass[n] == zero
        below[n] = any((principal[m] and m) or below[m] for m in lower)
        if n and principal[n] and not below[n]:
            t = [0] * K.h
            for j, e in enumerate(exps):
                t[cls[j]] += e
            tally[tuple(t)] += 1
    return tally


def nu(K: QuadField, I: QIIdeal) -> int:
    """Number of nonassociate irreducible elements whose ideal divides I."""
    return sum(irreducible_divisor_types(K, I).values())


def binomial_type_count(omega: TypeVec, t: TypeVec) -> int:
    """Squarefree divisors of type t of an ideal with omega_i primes in class i."""
    return math.prod(math.comb(w, k) for w, k in zip(omega, t))


def nu_by_types(K: QuadField, I: QIIdeal) -> int:
    """nu of a squarefree ideal from its per-class prime counts alone."""
    omega = K.omega_by_class(I)
    return sum(binomial_type_count(omega, t) for t in _irreducible_types(K.ordering))


# -- ideal enumeration -------------------------------------------------------


def enumerate_ideals(
    K: QuadField, X: int, coprime_to: Optional[QIIdeal] = None
) -> Iterator[tuple[QIIdeal, tuple[tuple[PrimeIdealRec, int], ...]]]:
    """All integral ideals of norm at most X with their factorisations, in
    increasing norm (ties by HNF)."""
    X = int(X)
    if X > SCAN_CAP:
        raise ScanTooLarge(f"X={X} exceeds {SCAN_CAP}")
    primes = [
        rec
        for rec in K.enumerate_prime_ideals(X)
        if coprime_to is None or not K.divides(rec.ideal, coprime_to)
    ]
    found = []

    def dfs(start: int, norm: int, factors: list):
        found.append((norm, tuple(factors)))
        for i in range(start, len(primes)):
            rec = primes[i]
            n = norm * rec.norm
            if n > X:
                break
            e = 1
            while n <= X:
                factors.append((rec, e))
                dfs(i + 1, n, factors)
                factors.pop()
                n *= rec.norm
                e += 1

    dfs(0, 1, [])
    out = [(K.product(f), f) for _, f in found]
    out.sort(key=lambda item: (item[0].norm, item[0]))
    return iter(out)


# -- strict ray classes ------------------------------------------------------


@dataclass(frozen=True)
class RayModulus:
    ideal: QIIdeal
    factors: tuple[tuple[PrimeIdealRec, int], ...]

    def to_json(self) -> dict:
        return {
            "ideal": self.ideal.to_json(),
            "factors": [[rec.ideal.to_json(), e] for rec, e in self.factors],
        }


def ray_modulus(K: QuadField, F: QIIdeal) -> RayModulus:
    return RayModulus(F, tuple(K.factorize(F)))


def _as_modulus(K: QuadField, F) -> RayModulus:
    return F if isinstance(F, RayModulus) else ray_modulus(K, F)


def _ord_rational(K: QuadField, rec: PrimeIdealRec, n: int) -> int:
    """ord_P of the rational integer n."""
    k = 0
    while n % rec.p == 0:
        n //= rec.p
        k += 1
    return k * rec.ramification


def is_coprime(K: QuadField, I: QIIdeal, J: QIIdeal) -> bool:
    return K.gcd_ideal(I, J).is_unit()


def same_strict_ray_class(K: QuadField, A: QIIdeal, B: QIIdeal, F) -> bool:
    """Whether A B^-1 = (gamma) with gamma = 1 mod F.

    A * conj(B) = (delta) makes gamma = u * delta / N(B) for a unit u; the
    congruence holds at P | F iff u * delta - N(B) lies in P^(e + ord_P N(B)).
    """
    F = _as_modulus(K, F)
    for I in (A, B):
        if not is_coprime(K, I, F.ideal):
            raise NotCoprimeToModulus(f"{I} is not coprime to {F.ideal}")
    delta = K.is_principal_with_generator(K.multiply(A, K.conjugate(B)))
    if delta is None:
        return False
    nb = B.norm
    targets = [K.power(rec.ideal, e + _ord_rational(K, rec, nb)) for rec, e in F.factors]
    for u in K.units:
        z = K.sub(K.mul(u, delta), QIInteger(nb, 0))
        if all(K.contains(T, z) for T in targets):
            return True
    return False


def unit_congruence_count(K: QuadField, F) -> int:
    """Number of units u with u = 1 mod F."""
    F = _as_modulus(K, F)
    return sum(K.contains(F.ideal, K.sub(u, QIInteger(1, 0))) for u in K.units)


def ray_phi(K: QuadField, F) -> Fraction:
    """h_{K,F} / h_K = Phi_K(F) / [U : U_{F,1}]."""
    F = _as_modulus(K, F)
    if F.ideal.a <= 0 or F.ideal.c <= 0:
        raise ZeroIdeal("zero modulus")
    phi_k = Fraction(F.ideal.norm)
    for rec, _ in F.factors:
        phi_k *= 1 - Fraction(1, rec.norm)
    return phi_k / Fraction(K.w, unit_congruence_count(K, F))


def ray_class_partition(K: QuadField, ideals, F) -> list[list[QIIdeal]]:
    """Split ideals coprime to F into strict ray classes by pairwise tests."""
    F = _as_modulus(K, F)
    classes: list[list[QIIdeal]] = []
    for I in ideals:
        for cl in classes:
            if same_strict_ray_class(K, I, cl[0], F):
                cl.append(I)
                break
        else:
            classes.append([I])
    return classes


# -- progressions ------------------------------------------------------------


@dataclass(frozen=True)
class ProgressionData:
    """gcd ideal g = (alpha, m), cofactor modulus f = m g^-1 and
    b = (alpha) g^-1."""

    g: QIIdeal
    f: RayModulus
    b: QIIdeal
    tau_prime: TypeVec


def progression_data(K: QuadField, m: QIIdeal, alpha: QIInteger) -> ProgressionData:
    A = K.principal(alpha)
    g = K.gcd_ideal(A, m)
    return ProgressionData(
        g, ray_modulus(K, K.divide_exact(m, g)), K.divide_exact(A, g), K.ideal_type(g)
    )


def progression_instance(K: QuadField, m: QIIdeal, alpha: QIInteger):
    from ..progression import ProgressionInstance

    data = progression_data(K, m, alpha)
    return ProgressionInstance(K.ordering, data.tau_prime, data.g.norm, ray_phi(K, data.f))


def is_irreducible_ideal(K: QuadField, factors) -> bool:
    """A principal ideal generated by an irreducible, judged from its type."""
    return K.type_of_factors(factors) in _irreducible_set(K)


def _irreducible_set(K: QuadField) -> frozenset:
    return frozenset(_irreducible_types(K.ordering))


def _check_x(x: int) -> int:
    x = int(x)
    if x > SCAN_CAP:
        raise ScanTooLarge(f"x={x} exceeds {SCAN_CAP}")
    return x


def coset_points(K: QuadField, x: int, m: QIIdeal, alpha: QIInteger) -> Iterator[QIInteger]:
    """Nonzero elements pi = alpha (mod m) with N(pi) <= x."""
    absd = -K.disc
    ymax = math.isqrt(4 * x // absd)
    # pi - alpha = i*(a, 0) + j*(b, c)
    y0 = -ymax + (alpha.y + ymax) % m.c
    for y in range(y0, ymax + 1, m.c):
        rest = 4 * x - absd * y * y
        if rest < 0:
            continue
        s = math.isqrt(rest)
        lo = -((s + K.t * y) // 2)
        hi = (s - K.t * y) // 2
        j = (y - alpha.y) // m.c
        r = (alpha.x + j * m.b) % m.a
        first = lo + (r - lo) % m.a
        for xx in range(first, hi + 1, m.a):
            if xx or y:
                yield QIInteger(xx, y)


def count_progression_elements(K: QuadField, x: int, m: QIIdeal, alpha: QIInteger) -> int:
    """Principal ideals (pi) with N(pi) <= x, pi irreducible and pi = alpha mod m,
    found by scanning lattice points."""
    x = _check_x(x)
    if alpha.x == 0 and alpha.y == 0:
        raise ZeroIdeal("alpha must be nonzero")
    seen = set()
    # irreducibility checked on the full subtype lattice, independent of the
    # enumerated irreducible types used by the ideal route
    verdicts: dict = {}
    for pi in coset_points(K, x, m, alpha):
        key = K.associate_key(pi)
        if key in seen:
            continue
        n = K.element_norm(pi)
        if n == 1:
            continue
        t = K.type_of_factors(K.factorize(K.principal(pi)))
        if t not in verdicts:
            verdicts[t] = is_irreducible_type(K.ordering, t)
        if verdicts[t]:
            seen.add(key)
    return len(seen)


def count_progression_ideals(K: QuadField, x: int, m: QIIdeal, alpha: QIInteger) -> int:
    """The same count via cofactors j = (pi) g^-1: ideals of norm <= x / N(g),
    coprime to f, with g j of irreducible type, in the ray class of b mod f."""
    x = _check_x(x)
    data = progression_data(K, m, alpha)
    tau = data.tau_prime
    allowed = {
        tuple(a - b for a, b in zip(t, tau))
        for t in _irreducible_types(K.ordering)
        if is_subtype(tau, t)
    }
    X = x // data.g.norm
    if X < 1 or not allowed:
        return 0
    f = data.f
    by_class: list[list[PrimeIdealRec]] = [[] for _ in range(K.h)]
    for rec in K.enumerate_prime_ideals(X):
        if any(rec.ideal == P.ideal for P, _ in f.factors):
            continue
        by_class[rec.class_index - 1].append(rec)
    keys = [[(r.norm, r.ideal) for r in lst] for lst in by_class]
    fits = [
        lambda t, i=i: any(all(c + (k == i) <= a for k, (c, a) in enumerate(zip(t, s))) for s in allowed)
        for i in range(K.h)
    ]

    count = 0

    def visit(factors):
        nonlocal count
        if K.type_of_factors(factors) not in allowed:
            return
        J = K.product(factors)
        if same_strict_ray_class(K, J, data.b, f):
            count += 1

    def dfs(t: list, last: tuple, norm: int, factors: list):
        visit(factors)
        for i in range(K.h):
            if not fits[i](t):
                continue
            lst = by_class[i]
            start = bisect.bisect_right(keys[i], last) if last else 0
            # a prime equal to the last one (repeated factor) is allowed
            if last and start and keys[i][start - 1] == last:
                start -= 1
            for rec in lst[start:]:
                n = norm * rec.norm
                if n > X:
                    break
                t[i] += 1
                if factors and factors[-1][0] == rec:
                    prev = factors.pop()
                    factors.append((rec, prev[1] + 1))
                    dfs(t, (rec.norm, rec.ideal), n, factors)
                    factors.pop()
                    factors.append(prev)
                else:
                    factors.append((rec, 1))
                    dfs(t, (rec.norm, rec.ideal), n, factors)
                    factors.pop()
                t[i] -= 1

    dfs([0] * K.h, (), 1, [])
    return count


def generator_in_progression(K: QuadField, I: QIIdeal, m: QIIdeal, alpha: QIInteger) -> bool:
    """Whether I has a generator congruent to alpha mod m (search over associates)."""
    g = K.is_principal_with_generator(I)
    if g is None:
        return False
    return any(K.contains(m, K.sub(K.mul(u, g), alpha)) for u in K.units)
