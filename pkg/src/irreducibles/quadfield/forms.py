"""Positive definite binary quadratic forms (a, b, c) of negative discriminant."""

from __future__ import annotations

import math

Form = tuple  # (a, b, c)


def discriminant(f: Form) -> int:
    a, b, c = f
    return b * b - 4 * a * c


def _normalize(a: int, b: int, c: int) -> Form:
    # bring b into (-a, a]
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def reduce_form(f: Form) -> Form:
    a, b, c = _normalize(*f)
    while a > c:
        a, b, c = _normalize(c, -b, a)
    if a == c and b < 0:
        b = -b
    return a, b, c


def is_reduced(f: Form) -> bool:
    a, b, c = f
    return abs(b) <= a <= c and not (b < 0 and (a == c or -b == a))


def reduced_forms(disc: int) -> list[Form]:
    """All primitive reduced forms of discriminant ``disc`` (< 0), sorted by (a, b)."""
    out = []
    amax = math.isqrt(-disc // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
    return sorted(out)


def principal_form(disc: int) -> Form:
    delta = disc % 2
    return 1, delta, (delta - disc) // 4


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        a, u0, v0 = -a, -u0, -v0
    return a, u0, v0


def compose(f1: Form, f2: Form) -> Form:
    """Gauss composition followed by reduction (Shanks' arrangement)."""
    disc = discriminant(f1)
    if discriminant(f2) != disc:
        raise ValueError("forms have different discriminants")
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - disc) // (4 * a3)
    return reduce_form((a3, b3, c3))


def inverse_form(f: Form) -> Form:
    a, b, c = f
    return reduce_form((a, -b, c))


def form_power(f: Form, n: int) -> Form:
    disc = discriminant(f)
    if n < 0:
        f, n = inverse_form(f), -n
    result = principal_form(disc)
    base = reduce_form(f)
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result
