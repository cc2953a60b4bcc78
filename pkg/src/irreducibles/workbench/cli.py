"""Command line interface.

Subcommands: group, field, constants, count, verify, report. Output is JSON
unless ``--format csv`` is given (count and report only); CSV columns are
experiment, x, class, observed, predicted, ratio.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from typing import Optional, Sequence

from ..errors import IrreduciblesError
from ..extremal import build_P, maximize_on_simplex
from ..groups import canonical_ordering, make_group
from ..progression import ProgressionInstance, progression_constants, rational_json
from ..quadfield.counting import (
    count_progression_elements,
    count_progression_ideals,
    enumerate_ideals,
    generator_in_progression,
    is_coprime,
    nu,
    nu_by_types,
    progression_data,
    progression_instance,
    same_strict_ray_class,
)
from ..quadfield.field import QIIdeal, QIInteger, QuadField, make_field
from ..typelab import davenport, enumerate_irreducible_types, maximal_types
from .experiments import landau_check, max_nu_scan, mertens_by_class, progression_experiment


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _grid(text: str) -> list[int]:
    try:
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _field(args) -> QuadField:
    if args.d is None:
        raise UsageError("--d is required")
    return make_field(args.d)


def _modulus(K: QuadField, vals: Optional[list[int]]) -> QIIdeal:
    if not vals:
        return QIIdeal(1, 0, 1)
    if len(vals) == 1:
        return K.principal(vals[0])
    if len(vals) == 3:
        I = QIIdeal(*vals)
        if not K.is_ideal(I):
            raise UsageError(f"{vals} is not an ideal in Hermite normal form")
        return I
    raise UsageError("--modulus takes an integer n or an HNF triple a,b,c")


def _alpha(K: QuadField, vals: Optional[list[int]], basis: str) -> QIInteger:
    if not vals:
        return QIInteger(1, 0)
    if len(vals) != 2:
        raise UsageError("--alpha takes two integers x,y")
    if basis == "omega":
        return QIInteger(*vals)
    try:
        return K.from_half(*vals)
    except ValueError as exc:
        raise UsageError(str(exc))


def _anchored(K: QuadField, m: QIIdeal, alpha: QIInteger) -> QuadField:
    """Re-order classes so the gcd ideal's class comes first when it is prime."""
    g = progression_data(K, m, alpha).g
    facs = K.factorize(g)
    if len(facs) == 1 and facs[0][1] == 1 and K.h > 1:
        try:
            return make_field(K.d, g)
        except IrreduciblesError:
            pass
    return K


# -- subcommands -------------------------------------------------------------


def cmd_group(args) -> tuple[object, int]:
    if args.invariants is None:
        raise UsageError("--invariants is required")
    G = make_group(args.invariants)
    ordering = canonical_ordering(G)
    emit = args.emit or "all"
    if emit == "D":
        return davenport(G).D, 0
    if emit == "types":
        return enumerate_irreducible_types(ordering).to_json(), 0
    if emit == "maximal":
        return maximal_types(ordering).to_json(), 0
    P = build_P(maximal_types(ordering))
    if emit == "P":
        return str(P), 0
    res = maximize_on_simplex(P, ordering.h, seed=args.seed)
    if emit == "M":
        return float(f"{res.M:.12g}"), 0
    out = {
        "group": G.to_json(),
        "ordering": [list(g) for g in ordering.classes],
        "D": davenport(G).D,
        "irreducible_types": enumerate_irreducible_types(ordering).to_json(),
        "maximal_types": maximal_types(ordering).to_json(),
        "P": str(P),
        "maximization": res.to_json(),
    }
    return out, 0


def cmd_field(args) -> tuple[object, int]:
    K = _field(args)
    out = K.to_json()
    out["h"] = K.h
    return out, 0


def cmd_constants(args) -> tuple[object, int]:
    if args.d is not None:
        K = _field(args)
        m = _modulus(K, args.modulus)
        alpha = _alpha(K, args.alpha, args.alpha_basis)
        K = _anchored(K, m, alpha)
        c = progression_constants(progression_instance(K, m, alpha))
        return c.to_json(), 0
    if args.invariants is None:
        raise UsageError("give --d (field) or --invariants (group)")
    ordering = canonical_ordering(make_group(args.invariants))
    tau = tuple(args.tau) if args.tau else (0,) * ordering.h
    inst = ProgressionInstance(ordering, tau, args.norm_g, args.phi)
    c = progression_constants(inst)
    out = c.to_json()
    if not any(tau):
        res = maximize_on_simplex(build_P(maximal_types(ordering)), ordering.h, seed=args.seed)
        out["D"] = c.L
        out["M"] = res.M
    return out, 0


def cmd_count(args) -> tuple[object, int]:
    K = _field(args)
    grid = args.xgrid or [10**4]
    exp = args.experiment
    if exp == "landau":
        return landau_check(K, grid), 0
    if exp == "mertens":
        return mertens_by_class(K, grid).to_json(), 0
    if exp == "maxnu":
        return [dict(x=x, **max_nu_scan(K, x).to_json()) for x in grid], 0
    m = _modulus(K, args.modulus)
    alpha = _alpha(K, args.alpha, args.alpha_basis)
    return progression_experiment(_anchored(K, m, alpha), m, alpha, grid), 0


def cmd_report(args) -> tuple[object, int]:
    K = _field(args)
    grid = args.xgrid or [10**3, 10**4]
    m = _modulus(K, args.modulus)
    alpha = _alpha(K, args.alpha, args.alpha_basis)
    reports = [landau_check(K, grid), progression_experiment(_anchored(K, m, alpha), m, alpha, grid)]
    for r in reports:
        r.seed = args.seed
    return reports, 0


def _verify_suite(seed: int) -> list[tuple[str, bool]]:
    rng = random.Random(seed)
    results = []
    for n in range(2, 9):
        results.append((f"davenport Z/{n}", davenport(make_group([n])).D == n))
    for d1, d2 in [(2, 2), (2, 4), (3, 3), (2, 6)]:
        results.append((f"davenport Z/{d1}+Z/{d2}", davenport(make_group([d1, d2])).D == d1 + d2 - 1))
    for h in range(2, 6):
        o = canonical_ordering(make_group([h]))
        M = maximize_on_simplex(build_P(maximal_types(o)), h, seed=seed).M
        results.append((f"cyclic M h={h}", abs(M - h**h / math.factorial(h)) <= 1e-8))

    K = make_field(-23)
    m, alpha = K.principal(3), QIInteger(0, 1)
    Ka = _anchored(K, m, alpha)
    inst = progression_instance(Ka, m, alpha)
    c = progression_constants(inst)
    results.append(("worked example tau'", inst.tau_prime == (1, 0, 0)))
    results.append(("worked example C'", (c.L, rational_json(c.C_prime)) == (2, {"num": 1, "den": 27})))
    results.append((
        "dual path x=2000",
        count_progression_elements(Ka, 2000, m, alpha) == count_progression_ideals(Ka, 2000, m, alpha),
    ))
    data = progression_data(Ka, m, alpha)
    ok = True
    for I, _ in enumerate_ideals(Ka, 200):
        if not Ka.divides(data.g, I):
            continue
        J = Ka.divide_exact(I, data.g)
        rhs = is_coprime(Ka, J, data.f.ideal) and same_strict_ray_class(Ka, J, data.b, data.f)
        ok &= rhs == generator_in_progression(Ka, I, m, alpha)
    results.append(("generator vs ray class N<=200", ok))

    for d in (-5, -23):
        Kd = make_field(d)
        primes = list(Kd.enumerate_prime_ideals(60))
        ok = True
        for _ in range(10):
            chosen = rng.sample(primes, rng.randint(1, 6))
            I = Kd.product((r, 1) for r in chosen)
            ok &= nu(Kd, I) == nu_by_types(Kd, I)
        results.append((f"binomial count d={d}", ok))
    return results


def cmd_verify(args) -> tuple[object, int]:
    results = _verify_suite(args.seed)
    out = {"checks": [{"name": n, "pass": bool(ok)} for n, ok in results]}
    out["all_pass"] = all(ok for _, ok in results)
    return out, 0 if out["all_pass"] else 2


# -- output ------------------------------------------------------------------


def _render(obj, fmt: str, timings: bool) -> str:
    from .experiments import ExperimentReport

    reports = obj if isinstance(obj, list) and obj and isinstance(obj[0], ExperimentReport) else None
    if isinstance(obj, ExperimentReport):
        reports = [obj]
    if fmt == "csv":
        if reports is None:
            raise UsageError("--format csv applies to count and report output")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["experiment", "x", "class", "observed", "predicted", "ratio"])
        for r in reports:
            w.writerows(r.csv_rows())
        return buf.getvalue().rstrip("\n")
    if reports is not None:
        payload = [r.to_json(timings) for r in reports]
        obj = payload[0] if len(payload) == 1 and not isinstance(obj, list) else payload
    return _dump(obj)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, help="squarefree d < 0 for Q(sqrt d)")
    common.add_argument("--invariants", type=_ints, help="invariant factors, e.g. 2,4")
    common.add_argument("--modulus", type=_ints, help="integer n for (n), or HNF triple a,b,c")
    common.add_argument("--alpha", type=_ints, help="x,y meaning (x + y sqrt d)/2")
    common.add_argument(
        "--alpha-basis", choices=["half", "omega"], default="half",
        help="read --alpha as (x + y sqrt d)/2 (half) or x + y omega",
    )
    common.add_argument("--xgrid", type=_grid, help="comma-separated x values")
    common.add_argument("--emit", choices=["D", "M", "types", "maximal", "P", "all"])
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--timings", action="store_true", help="include wall-clock seconds")

    p = _Parser(prog="irreducibles", description="Constants and experiments for irreducible elements.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("group", parents=[common], help="D, irreducible and maximal types, P and M")
    sub.add_parser("field", parents=[common], help="class group and reduced forms of Q(sqrt d)")
    c = sub.add_parser("constants", parents=[common], help="L and C' for a progression")
    c.add_argument("--tau", type=_ints, help="type of the gcd ideal (group mode)")
    c.add_argument("--norm-g", type=int, default=1)
    c.add_argument("--phi", type=str, default="1", help="rational, e.g. 3/2")
    k = sub.add_parser("count", parents=[common], help="run one experiment")
    k.add_argument(
        "--experiment", choices=["progression", "landau", "mertens", "maxnu"], default="progression"
    )
    sub.add_parser("verify", parents=[common], help="run the built-in invariant checks")
    sub.add_parser("report", parents=[common], help="Landau and progression reports together")
    return p


COMMANDS = {
    "group": cmd_group,
    "field": cmd_field,
    "constants": cmd_constants,
    "count": cmd_count,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        obj, code = COMMANDS[args.command](args)
        text = _render(obj, args.format, args.timings)
    except (UsageError, IrreduciblesError, ValueError) as exc:
        print(f"irreducibles {args.command}: error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
