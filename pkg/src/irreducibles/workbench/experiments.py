"""Desk-scale experiments: prime ideal counts per class, Mertens sums,
extremal ideals, maximal nu, and progression counts against main terms."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad

from ..errors import ScanTooLarge
from ..progression import (
    ProgressionConstants,
    is_weakly_coprime_type,
    predicted_progression_count,
    progression_constants,
)
from ..quadfield.counting import (
    SCAN_CAP,
    binomial_type_count,
    count_progression_elements,
    count_progression_ideals,
    nu,
    progression_data,
    progression_instance,
)
from ..quadfield.field import UNIT_IDEAL, PrimeIdealRec, QIIdeal, QIInteger, QuadField
from ..typelab import _irreducible_types

RATIO_BAND = (0.4, 2.5)
LANDAU_BAND = 0.15


def li(x: float) -> float:
    """Offset logarithmic integral: integral of dt/log t from 2 to x."""
    if x <= 2:
        return 0.0
    val, _ = quad(lambda t: 1.0 / math.log(t), 2.0, x, epsrel=1e-12, epsabs=0.0, limit=500)
    return val


def _check_grid(x_grid: Sequence[int], cap: int = SCAN_CAP) -> list[int]:
    grid = [int(x) for x in x_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("x grid must be strictly increasing")
    if grid and grid[-1] > cap:
        raise ScanTooLarge(f"x={grid[-1]} exceeds {cap}")
    return grid


@dataclass
class ExperimentReport:
    experiment: str
    parameters: dict
    x_grid: list[int]
    observed: list
    predicted: list
    ratios: list
    seed: int = 0
    checks: dict = field(default_factory=dict)
    seconds: Optional[float] = None

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "experiment": self.experiment,
            "parameters": self.parameters,
            "x_grid": self.x_grid,
            "observed": self.observed,
            "predicted": self.predicted,
            "ratios": self.ratios,
            "checks": self.checks,
            "seed": self.seed,
        }
        if timings:
            out["seconds"] = self.seconds
        return out

    def csv_rows(self) -> list[list]:
        """Rows of (experiment, x, class, observed, predicted, ratio); class is
        empty for single-series experiments."""
        rows = []
        for x, obs, pred, rat in zip(self.x_grid, self.observed, self.predicted, self.ratios):
            if isinstance(obs, list):
                for i, (o, p, r) in enumerate(zip(obs, pred, rat), start=1):
                    rows.append([self.experiment, x, i, o, p, r])
            else:
                rows.append([self.experiment, x, "", obs, pred, rat])
        return rows


def _ratio(obs: float, pred: float) -> Optional[float]:
    return obs / pred if pred else None


def prime_counts_by_class(K: QuadField, x_grid: Sequence[int]) -> list[list[int]]:
    grid = _check_grid(x_grid)
    counts = np.zeros((len(grid), K.h), dtype=np.int64)
    if grid:
        norms = np.array([r.norm for r in K.enumerate_prime_ideals(grid[-1])], dtype=np.int64)
        classes = np.array([r.class_index - 1 for r in K.enumerate_prime_ideals(grid[-1])])
        for k, x in enumerate(grid):
            sel = norms <= x
            counts[k] = np.bincount(classes[sel], minlength=K.h)
    return counts.tolist()


def landau_check(K: QuadField, x_grid: Sequence[int]) -> ExperimentReport:
    """pi_K(x; C) per ideal class against Li(x)/h."""
    t0 = time.perf_counter()
    grid = _check_grid(x_grid)
    observed = prime_counts_by_class(K, grid)
    predicted = [[li(x) / K.h] * K.h for x in grid]
    ratios = [[_ratio(o, p) for o, p in zip(os, ps)] for os, ps in zip(observed, predicted)]
    checks = {
        "band": [1 - LANDAU_BAND, 1 + LANDAU_BAND],
        "in_band": [all(r is not None and abs(r - 1) <= LANDAU_BAND for r in rs) for rs in ratios],
    }
    return ExperimentReport(
        "landau",
        {"d": K.d, "h": K.h},
        grid,
        observed,
        predicted,
        ratios,
        checks=checks,
        seconds=time.perf_counter() - t0,
    )


@dataclass
class MertensTable:
    x_grid: list[int]
    sums: list[list[float]]  # sums[k][i]: class i + 1 at x_grid[k]
    residuals: list[list[float]]

    def to_json(self) -> dict:
        return {"x_grid": self.x_grid, "sums": self.sums, "residuals": self.residuals}


def mertens_by_class(K: QuadField, x_grid: Sequence[int]) -> MertensTable:
    """Sum of 1/N(P) over prime ideals of norm <= x in each class, and the
    residual against (1/h) log log x."""
    grid = _check_grid(x_grid)
    recs = list(K.enumerate_prime_ideals(grid[-1])) if grid else []
    sums, residuals = [], []
    for x in grid:
        terms: list[list[float]] = [[] for _ in range(K.h)]
        for r in recs:
            if r.norm > x:
                break
            terms[r.class_index - 1].append(1.0 / r.norm)
        vals = [math.fsum(t) for t in terms]
        sums.append(vals)
        main = math.log(math.log(x)) / K.h if x > math.e else 0.0
        residuals.append([v - main for v in vals])
    return MertensTable(grid, sums, residuals)


@dataclass
class ExtremalIdeal:
    ideal: QIIdeal
    primes: list[PrimeIdealRec]
    omega: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "ideal": self.ideal.to_json(),
            "primes": [r.ideal.to_json() for r in self.primes],
            "omega": list(self.omega),
        }


def build_extremal_ideal(K: QuadField, X: float, gamma: Sequence[float]) -> ExtremalIdeal:
    """Product of the primes of class C_i with norm at most gamma_i log X."""
    if len(gamma) != K.h:
        raise ValueError(f"gamma needs {K.h} coordinates")
    bounds = [g * math.log(X) for g in gamma]
    top = int(max(bounds, default=0) + 1e-9)
    chosen = []
    for r in K.enumerate_prime_ideals(top) if top >= 2 else ():
        if r.norm <= bounds[r.class_index - 1] + 1e-9:
            chosen.append(r)
    omega = [0] * K.h
    for r in chosen:
        omega[r.class_index - 1] += 1
    return ExtremalIdeal(K.product((r, 1) for r in chosen), chosen, tuple(omega))


@dataclass
class NuScan:
    max_nu: int
    witness: QIIdeal
    greedy_nu: int
    greedy_ideal: QIIdeal
    relaxed_nu: int
    relaxed_ideal: QIIdeal

    def to_json(self) -> dict:
        return {
            "max_nu": self.max_nu,
            "witness": self.witness.to_json(),
            "greedy_nu": self.greedy_nu,
            "greedy_ideal": self.greedy_ideal.to_json(),
            "relaxed_nu": self.relaxed_nu,
            "relaxed_ideal": self.relaxed_ideal.to_json(),
        }


def _greedy(K: QuadField, x: int) -> tuple[int, QIIdeal, int, QIIdeal]:
    """Squarefree ideals built from the k_i smallest primes of each class C_i.

    Returns the best such ideal overall and the best principal one, scored
    by the binomial count of irreducible divisors.
    """
    per_class: list[list[PrimeIdealRec]] = [[] for _ in range(K.h)]
    for r in K.enumerate_prime_ideals(max(x, 2)):
        per_class[r.class_index - 1].append(r)
    prefix = [[1] for _ in range(K.h)]
    for i, lst in enumerate(per_class):
        for r in lst:
            prefix[i].append(prefix[i][-1] * r.norm)
    types = _irreducible_types(K.ordering)
    add = K.ordering.add_table
    zero = K.ordering.index0(K.ordering.group.identity)
    best = (0, (0,) * K.h)
    best_p = (0, (0,) * K.h)

    def dfs(i: int, norm: int, ks: list, cls: int):
        nonlocal best, best_p
        if i == K.h:
            v = sum(binomial_type_count(ks, t) for t in types)
            key = (v, tuple(ks))
            best = max(best, key, key=lambda b: (b[0], [-k for k in b[1]]))
            if cls == zero:
                best_p = max(best_p, key, key=lambda b: (b[0], [-k for k in b[1]]))
            return
        k = 0
        c = cls
        while k < len(prefix[i]) and norm * prefix[i][k] <= x:
            ks.append(k)
            dfs(i + 1, norm * prefix[i][k], ks, c)
            ks.pop()
            c = add[c][i]
            k += 1

    dfs(0, 1, [], zero)

    def ideal(ks):
        return K.product((r, 1) for i, k in enumerate(ks) for r in per_class[i][:k])

    return best_p[0], ideal(best_p[1]), best[0], ideal(best[1])


def max_nu_scan(K: QuadField, x: int) -> NuScan:
    """Exact maximum of nu over principal ideals of norm <= x, by scanning
    elements, with the smallest-primes-per-class constructions alongside."""
    x = int(x)
    if x > 10**5:
        raise ScanTooLarge(f"element scan needs x <= 1e5, got {x}")
    best = (0, UNIT_IDEAL)
    seen = set()
    for u in K.elements_of_norm_upto(x):
        key = K.associate_key(u)
        if key in seen:
            continue
        seen.add(key)
        I = K.principal(u)
        v = nu(K, I)
        if v > best[0] or (v == best[0] and (I.norm, I) < (best[1].norm, best[1])):
            best = (v, I)
    g, gi, r, ri = _greedy(K, x)
    return NuScan(best[0], best[1], g, gi, r, ri)


def progression_experiment(
    K: QuadField,
    m: QIIdeal,
    alpha: QIInteger,
    x_grid: Sequence[int],
    cross_check: bool = True,
) -> ExperimentReport:
    """Observed irreducible counts in the class of alpha mod m against
    C' x/log x (log log x)^(L-1)."""
    t0 = time.perf_counter()
    grid = _check_grid(x_grid)
    data = progression_data(K, m, alpha)
    params = {
        "d": K.d,
        "modulus": m.to_json(),
        "alpha": alpha.to_json(),
        "g": data.g.to_json(),
        "tau_prime": list(data.tau_prime),
    }
    observed = [count_progression_ideals(K, x, m, alpha) for x in grid]
    checks: dict = {}
    if cross_check and grid:
        el = count_progression_elements(K, grid[0], m, alpha)
        checks["element_path"] = {"x": grid[0], "count": el, "agrees": el == observed[0]}
    if not is_weakly_coprime_type(K.ordering, data.tau_prime):
        checks["degenerate"] = True
        checks["at_most_one"] = all(o <= 1 for o in observed)
        return ExperimentReport(
            "progression", params, grid, observed, [None] * len(grid), [None] * len(grid),
            checks=checks, seconds=time.perf_counter() - t0,
        )
    consts: ProgressionConstants = progression_constants(progression_instance(K, m, alpha))
    params["L"] = consts.L
    params["C_prime"] = {"num": consts.C_prime.numerator, "den": consts.C_prime.denominator}
    predicted = [predicted_progression_count(consts, x) for x in grid]
    ratios = [_ratio(o, p) for o, p in zip(observed, predicted)]
    dev = [abs(r - 1) for r in ratios]
    checks["band"] = list(RATIO_BAND)
    checks["in_band"] = all(RATIO_BAND[0] <= r <= RATIO_BAND[1] for r in ratios)
    checks["deviation_nonincreasing"] = all(b <= a for a, b in zip(dev, dev[1:]))
    return ExperimentReport(
        "progression", params, grid, observed, predicted, ratios,
        checks=checks, seconds=time.perf_counter() - t0,
    )
