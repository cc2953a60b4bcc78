"""The polynomial P built from maximal types, its maximum M on the scaled
simplex, and the main term for the maximal number of irreducible divisors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, EmptyTypeSet, NonConvergence
from .typelab import TypeSet, factorial_weight

SIMPLEX_TOL = 1e-12
STATIONARY_TOL = 1e-10


@dataclass(frozen=True)
class PolynomialP:
    h: int
    monomials: tuple[tuple[tuple[int, ...], Fraction], ...]
    _exps: np.ndarray = field(init=False, repr=False, compare=False)
    _coefs: np.ndarray = field(init=False, repr=False, compare=False)
    _d1: tuple = field(init=False, repr=False, compare=False)
    _d2: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        h = self.h
        exps = np.array([m[0] for m in self.monomials], dtype=np.int64).reshape(-1, h)
        coefs = np.array([float(m[1]) for m in self.monomials], dtype=float)
        object.__setattr__(self, "_exps", exps)
        object.__setattr__(self, "_coefs", coefs)
        # first derivatives: d/dx_i of each monomial is (c * e_i) * x^(e - 1_i)
        eye = np.eye(h, dtype=np.int64)
        d1_exps = np.maximum(exps[None, :, :] - eye[:, None, :], 0)
        d1_coef = coefs[None, :] * exps.T
        object.__setattr__(self, "_d1", (d1_exps, d1_coef))
        pairs = eye[:, None, :] + eye[None, :, :]
        d2_exps = np.maximum(exps[None, None, :, :] - pairs[:, :, None, :], 0)
        mult = exps.T[:, None, :] * (exps.T[None, :, :] - eye[:, :, None])
        d2_coef = coefs[None, None, :] * np.maximum(mult, 0)
        object.__setattr__(self, "_d2", (d2_exps, d2_coef))

    @property
    def degree(self) -> int:
        return max(sum(e) for e, _ in self.monomials)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.h:
            raise DimensionMismatch(f"expected {self.h} coordinates, got {x.shape[-1]}")
        return x

    def __call__(self, x) -> float:
        return eval_P(self, x)

    def exact(self, x: Sequence[Fraction]) -> Fraction:
        """Exact evaluation at a rational point."""
        total = Fraction(0)
        for e, c in self.monomials:
            term = c
            for xi, ei in zip(x, e):
                term *= Fraction(xi) ** ei
            total += term
        return total

    def __str__(self):
        parts = []
        for e, c in self.monomials:
            mono = "*".join(f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}" for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts)


def build_P(T_max: TypeSet) -> PolynomialP:
    if not len(T_max):
        raise EmptyTypeSet("no maximal types")
    if T_max.kind != "maximal":
        raise EmptyTypeSet(f"expected a set of maximal types, got kind={T_max.kind!r}")
    return PolynomialP(T_max.ordering.h, tuple((t, factorial_weight(t)) for t in T_max))


def eval_P(P: PolynomialP, x) -> float | np.ndarray:
    """Value of P at ``x``; ``x`` may be a single point or an (n, h) batch."""
    x = P._check(x)
    vals = np.prod(x[..., None, :] ** P._exps, axis=-1) @ P._coefs
    return float(vals) if np.ndim(vals) == 0 else vals


def grad_P(P: PolynomialP, x) -> np.ndarray:
    x = P._check(x)
    exps, coef = P._d1
    return np.sum(coef * np.prod(x ** exps, axis=-1), axis=-1)


def hess_P(P: PolynomialP, x) -> np.ndarray:
    x = P._check(x)
    exps, coef = P._d2
    return np.sum(coef * np.prod(x ** exps, axis=-1), axis=-1)


def project_to_face(y: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = total}."""
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - total
    k = np.arange(1, len(y) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(y - theta, 0.0)


@dataclass
class MaximizationResult:
    M: float
    argmax: np.ndarray
    kkt_residual: float
    restarts_used: int
    seed: int

    def to_json(self) -> dict:
        return {
            "m": self.M,
            "argmax": [float(v) for v in self.argmax],
            "kkt_residual": self.kkt_residual,
            "seed": self.seed,
        }


def kkt_residual(P: PolynomialP, x: np.ndarray, h: int) -> float:
    """Unit-step projected gradient length, relative to the gradient size."""
    g = grad_P(P, x)
    r = np.linalg.norm(x - project_to_face(x + g, h))
    return float(r / max(1.0, np.max(np.abs(g))))


def _ascend(P: PolynomialP, x: np.ndarray, h: int, max_iter: int) -> tuple[np.ndarray, float]:
    """Projected gradient ascent with Armijo backtracking, until stationary or
    until no increase is visible in double precision."""
    step = 1.0
    fx = eval_P(P, x)
    for _ in range(max_iter):
        g = grad_P(P, x)
        scale = max(1.0, np.max(np.abs(g)))
        if np.linalg.norm(x - project_to_face(x + g, h)) / scale < STATIONARY_TOL:
            break
        step = min(step * 2.0, 1e6)
        while True:
            y = project_to_face(x + (step / scale) * g, h)
            fy = eval_P(P, y)
            if fy >= fx + 1e-4 * g @ (y - x) or step < 1e-14:
                break
            step *= 0.5
        if not fy > fx * (1 + 1e-15):
            if fy > fx:
                x, fx = y, fy
            break
        x, fx = y, fy
    return x, fx


def _polish(P: PolynomialP, x: np.ndarray, h: int, steps: int = 30) -> np.ndarray:
    """Newton iteration on grad P = lambda, sum x = h over the support of x.

    Function values stop resolving progress once the residual is near
    sqrt(machine eps); the first-order system keeps converging past that.
    """
    support = np.nonzero(x > 1e-9 * h)[0]
    k = len(support)
    if k <= 1:
        return x
    best, best_r = x, kkt_residual(P, x, h)
    z = x.copy()
    lam = float(np.mean(grad_P(P, z)[support]))
    for _ in range(steps):
        g = grad_P(P, z)[support]
        H = hess_P(P, z)[np.ix_(support, support)]
        J = np.zeros((k + 1, k + 1))
        J[:k, :k] = H
        J[:k, k] = -1.0
        J[k, :k] = 1.0
        F = np.concatenate([g - lam, [z[support].sum() - h]])
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        cand = z.copy()
        cand[support] += delta[:k]
        if np.any(cand[support] <= 0):
            break
        z, lam = cand, lam + delta[k]
        r = kkt_residual(P, z, h)
        if r < best_r and eval_P(P, z) >= eval_P(P, best) - 1e-12 * abs(eval_P(P, best)):
            best, best_r = z.copy(), r
        if r < STATIONARY_TOL * 1e-2:
            break
    return best


def maximize_on_simplex(
    P: PolynomialP,
    h: int,
    seed: int = 0,
    n_random: int = 50,
    max_iter: int = 5000,
) -> MaximizationResult:
    """Multi-start projected gradient ascent on the face sum(x) = h.

    All coefficients are positive, so P is nondecreasing in every coordinate
    and some maximiser lies on that face.
    """
    if not P.monomials:
        raise EmptyTypeSet("empty polynomial")
    if P.h != h:
        raise DimensionMismatch(f"polynomial has dimension {P.h}, simplex {h}")
    rng = np.random.default_rng(seed)
    starts = [h * row for row in np.eye(h)]
    starts.append(np.ones(h))
    starts.extend(h * rng.dirichlet(np.ones(h)) for _ in range(n_random))

    # short ascent from every start, then finish the most promising few
    runs = [_ascend(P, np.asarray(x0, dtype=float), h, 200) for x0 in starts]
    order = sorted(range(len(runs)), key=lambda i: -runs[i][1])
    finalists = []
    for i in order:
        if all(np.linalg.norm(runs[i][0] - runs[j][0]) > 1e-6 for j in finalists):
            finalists.append(i)
        if len(finalists) == 5:
            break
    best: Optional[tuple[float, np.ndarray]] = None
    for i in finalists:
        x, _ = _ascend(P, runs[i][0], h, max_iter)
        x = _polish(P, x, h)
        fx = eval_P(P, x)
        if best is None or fx > best[0]:
            best = (fx, x)
    x = best[1]
    res = kkt_residual(P, x, h)
    result = MaximizationResult(eval_P(P, x), x, res, len(starts), seed)
    if res >= STATIONARY_TOL:
        raise NonConvergence(f"best start stalled with KKT residual {res:.3g}", best=result)
    return result


def in_simplex(x, h: int, tol: float = SIMPLEX_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(x >= -tol) and x.sum() <= h + tol)


def max_nu_main_term(M: float, h: int, D: int, x: float) -> float:
    """M * (log x / (h log log x))**D."""
    if not x > math.exp(math.e):
        raise DomainError("main term needs x > e^e")
    lx = math.log(x)
    return M * (lx / (h * math.log(lx))) ** D
