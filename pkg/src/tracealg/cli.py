"""Command-line entry point: series, special, generators, simtest, verify."""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
WORKERS_ENV = "TRACEALG_WORKERS"


class UsageError(ValueError):
    pass


@dataclass
class Outcome:
    code: int
    text: str
    payload: object


# ---------------------------------------------------------------- series

def _closed_form(f, n: int, variant: str):
    """Rewrite a bigraded result over its closed-form binomial denominator."""
    from .molien import denominator_mixed_binomials, denominator_pure, numerator_over
    from .polyrat import RatFn
    den = denominator_pure(n) if variant == "pure" else denominator_mixed_binomials(n)
    try:
        return RatFn(numerator_over(f, den), den)
    except ArithmeticError:
        return f


def _parse_order(text: str | None, n: int) -> list[int] | None:
    if text is None:
        return None
    try:
        order = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--order expects comma-separated integers, got {text!r}")
    if sorted(order) != list(range(1, n)):
        raise UsageError(f"--order must be a permutation of 1..{n - 1}")
    return order


def _ratfn_outcome(f, expand: int | None) -> Outcome:
    from .polyrat import dumps_ratfn, ratfn_expand
    text = dumps_ratfn(f)
    payload: dict = {"ratfn": text}
    if expand is not None:
        series = ratfn_expand(f, expand)
        payload["series"] = json.loads(series.to_json())
        text += series.to_json() + "\n"
    return Outcome(EXIT_OK, text, payload)


def run_series(args) -> Outcome:
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    if args.method == "formanek":
        return _series_formanek(args)
    from . import molien
    if args.n == 0:
        raise UsageError("the residue engine needs --n >= 1")
    if args.variant == "sharp":
        return _ratfn_outcome(molien.poincare_sharp(args.n), args.expand)
    if args.variant == "bullet":
        return _ratfn_outcome(molien.poincare_bullet(args.n), args.expand)
    order = _parse_order(args.order, args.n)
    f = molien.poincare_bigraded(args.n, args.variant, order=order)
    f = molien.single_graded(f) if args.grading == "single" else _closed_form(f, args.n, args.variant)
    return _ratfn_outcome(f, args.expand)


def _series_formanek(args) -> Outcome:
    from .symchar import formanek_mixed, formanek_pure, single_graded
    if args.variant not in ("pure", "mixed"):
        raise UsageError("the character engine supports --variant pure|mixed")
    if args.max_degree is None:
        raise UsageError("--method formanek needs --max-degree")
    engine = formanek_pure if args.variant == "pure" else formanek_mixed
    exps, series = engine(args.n, args.max_degree)
    if args.schur:
        rows = [{"degree": e.k, "terms": [[p, q, c] for (p, q), c in e.ordered()]} for e in exps]
        text = "".join(f"{r['degree']}: " + " ".join(f"{c}*f[{p},{q}]" for p, q, c in r["terms"]) + "\n"
                       for r in rows)
        return Outcome(EXIT_OK, text, {"schur": rows})
    if args.grading == "single":
        coeffs = single_graded(series)
        return Outcome(EXIT_OK, " ".join(map(str, coeffs)) + "\n", {"coeffs": coeffs})
    return Outcome(EXIT_OK, series.to_json() + "\n", json.loads(series.to_json()))


def run_special(args) -> Outcome:
    args.variant, args.method, args.grading, args.order = args.kind, "molien", "single", None
    return run_series(args)


# ---------------------------------------------------------------- generators and simtest

GENERATOR_DEFAULTS = {"ter1": (4, False), "gen1": (4, False), "gen1_alt": (4, False), "p171": (5, True)}


def run_generators(args) -> Outcome:
    from .tracelab import BudgetExceeded, generator_set, verify_generating_set
    if args.set not in GENERATOR_DEFAULTS:
        raise UsageError(f"unknown set {args.set!r}")
    n_default, trace_zero = GENERATOR_DEFAULTS[args.set]
    n = args.n if args.n is not None else n_default
    if n != n_default:
        raise UsageError(f"set {args.set} is a generating set for n = {n_default}")
    gens = generator_set(args.set)
    rows: list = []
    code = EXIT_OK
    try:
        report = verify_generating_set(n, gens, args.max_degree, trace_zero, seed=args.seed,
                                       progress=rows.append)
        code = EXIT_OK if report.passed else EXIT_FAIL
    except BudgetExceeded as e:
        code, note = EXIT_BUDGET, str(e)
    else:
        note = None
    table = [{"degree": d, "subalgebra": s, "full": f, "deficit": f - s} for d, s, f in rows]
    text = "".join(f"degree {r['degree']}: {r['subalgebra']} of {r['full']}"
                   + (f" (deficit {r['deficit']})" if r["deficit"] else "") + "\n" for r in table)
    if note:
        text += f"budget exceeded: {note}\n"
    payload = {"set": args.set, "n": n, "trace_zero": trace_zero, "seed": args.seed, "rows": table,
               "status": {EXIT_OK: "pass", EXIT_FAIL: "fail", EXIT_BUDGET: "budget"}[code]}
    return Outcome(code, text, payload)


def _load_matrix(path: str):
    import numpy as np
    try:
        with open(path) as fh:
            data = json.load(fh)
        m = np.array([[complex(re, im) for re, im in row] for row in data])
    except (OSError, ValueError, TypeError) as e:
        raise UsageError(f"cannot read matrix from {path}: {e}")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError(f"{path} is not a square matrix")
    return m


def run_simtest(args) -> Outcome:
    from .tracelab import exhaustive_word_test, unitary_similar
    a, b = _load_matrix(args.a), _load_matrix(args.b)
    if a.shape != b.shape:
        raise UsageError("matrices differ in size")
    if args.exhaustive is not None:
        verdict = exhaustive_word_test(a, b, args.exhaustive, args.tol)
    else:
        if a.shape != (4, 4):
            raise UsageError("the 20-word test needs 4x4 matrices; pass --exhaustive L otherwise")
        verdict = unitary_similar(a, b, args.tol)
    payload = verdict.to_json()
    return Outcome(EXIT_OK, json.dumps(payload, sort_keys=True) + "\n", payload)


# ---------------------------------------------------------------- verify

def _suite(budget: str, unbounded: bool) -> list[tuple]:
    from .paperdata import CHECKS, fixture_ids
    tasks: list[tuple] = [("identity", name, None) for name in CHECKS]
    for sid in fixture_ids():
        if sid.startswith(("pure_series", "mixed_series", "pure_tracezero_series")):
            tasks.append(("taylor", sid, "formanek", 19))
            if not sid.endswith("_n0"):
                tasks.append(("taylor", sid, "fixture", 19))
            n = int(sid.rsplit("_n", 1)[1])
            if 1 <= n <= 4 and "tracezero" not in sid:
                tasks.append(("taylor", sid, "molien", 19))
        elif sid.startswith(("sharp_series", "bullet_series")):
            n = int(sid.rsplit("_n", 1)[1])
            tasks.append(("taylor", sid, "fixture", 25))
            if n <= 3 or (budget == "full" and n == 4):
                tasks.append(("taylor", sid, "molien", 24))
    if budget == "quick":
        tasks += [("generators", "gen1", 8), ("ter1_deficit",), ("generators", "p171", 8)]
    else:
        tasks += [("generators", "gen1", 14), ("ter1_deficit",), ("generators", "p171", 15)]
    if budget == "full":
        tasks.append(("schur", 25))
    if unbounded:
        tasks += [("engine_bigraded", 5), ("engine_bigraded", 6)]
    return tasks


def _run_task(item: tuple[tuple, int]) -> dict:
    from . import paperdata
    from .tracelab import BudgetExceeded, generator_set, verify_generating_set
    task, seed = item
    kind = task[0]
    try:
        if kind == "identity":
            return paperdata.check_identity(task[1], task[2]).to_json()
        if kind == "taylor":
            return paperdata.taylor_regression(task[1], task[2], task[3]).to_json()
        if kind == "generators":
            name, d = task[1], task[2]
            n, tz = GENERATOR_DEFAULTS[name]
            rep = verify_generating_set(n, generator_set(name), d, tz, seed=seed)
            out = {"check": f"generators:{name}:n={n}:d<={d}", "status": "pass" if rep.passed else "fail"}
            if not rep.passed:
                out["first_deficit"] = list(rep.first_deficit())
            return out
        if kind == "ter1_deficit":
            rep = verify_generating_set(4, generator_set("ter1"), 5, seed=seed)
            ok = rep.first_deficit() == (5, 2)
            return {"check": "generators:ter1:first_deficit", "status": "pass" if ok else "fail",
                    "first_deficit": list(rep.first_deficit() or [])}
        if kind == "schur":
            return paperdata.check_schur_expansion(None, task[1]).to_json()
        if kind == "engine_bigraded":
            from .molien import numerator_over, denominator_pure, poincare_bigraded
            got = numerator_over(poincare_bigraded(task[1], "pure"), denominator_pure(task[1]))
            ok = got == paperdata.bigraded_numerator(task[1], "pure")
            return {"check": f"engine_bigraded:pure:n={task[1]}", "status": "pass" if ok else "fail"}
    except BudgetExceeded as e:
        return {"check": ":".join(map(str, task)), "status": "budget", "error": str(e)}
    except Exception as e:  # reported, not raised: one broken check must not hide the others
        return {"check": ":".join(map(str, task)), "status": "error", "error": f"{type(e).__name__}: {e}"}
    raise UsageError(f"unknown task {task!r}")


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}")


def _map(tasks: list[tuple], seed: int) -> list[dict]:
    workers = _workers()
    items = [(t, seed) for t in tasks]
    if workers == 1 or len(tasks) == 1:
        return [_run_task(i) for i in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, items))  # map keeps submission order


def run_verify(args) -> Outcome:
    from .paperdata import ALIASES, CHECKS
    if args.target == "all" and args.id:
        raise UsageError("give either 'all' or --id, not both")
    if args.id:
        if args.id not in CHECKS and args.id not in ALIASES:
            raise UsageError(f"unknown identity {args.id!r}; known: {', '.join(list(CHECKS) + list(ALIASES))}")
        tasks = [("identity", args.id, args.n)]
    elif args.target == "all":
        tasks = _suite(args.budget, args.unbounded)
    else:
        raise UsageError("verify needs 'all' or --id NAME")
    results = _map(tasks, args.seed)
    statuses = [r["status"] for r in results]
    if any(s in ("fail", "error") for s in statuses):
        code = EXIT_FAIL
    elif "budget" in statuses:
        code = EXIT_BUDGET
    else:
        code = EXIT_OK
    text = "".join(f"{r['status'].upper():6} {r['check']}\n" for r in results)
    text += f"{statuses.count('pass')}/{len(results)} passed\n"
    payload = {"budget": args.budget, "checks": results,
               "passed": statuses.count("pass"), "total": len(results)}
    return Outcome(code, text, payload)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    def shared(defaults: bool) -> argparse.ArgumentParser:
        # subcommands repeat the options with suppressed defaults so either position works
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        q = argparse.ArgumentParser(add_help=False)
        q.add_argument("--format", choices=("text", "json"), default=d("text"))
        q.add_argument("--seed", type=int, default=d(0), help="seed for all randomized steps (default 0)")
        q.add_argument("--output", default=d(None), help="write the result here instead of stdout")
        return q

    common = shared(False)
    p = argparse.ArgumentParser(prog="tracealg", parents=[shared(True)],
                                description="Poincare series and generating sets of trace algebras of two generic matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("series", parents=[common], help="bigraded or single-graded Poincare series")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--variant", choices=("pure", "mixed", "sharp", "bullet"), default="pure")
    s.add_argument("--grading", choices=("bi", "single"), default="bi")
    s.add_argument("--method", choices=("molien", "formanek"), default="molien")
    s.add_argument("--expand", type=int, metavar="D", help="also print the Taylor expansion to degree D")
    s.add_argument("--order", help="integration order of the torus variables, e.g. 1,2")
    s.add_argument("--max-degree", type=int, help="truncation degree for --method formanek")
    s.add_argument("--schur", action="store_true", help="per-degree Schur coefficients (formanek)")
    s.set_defaults(func=run_series)

    sp = sub.add_parser("special", parents=[common], help="SL2 (sharp) or torus (bullet) invariant subalgebra")
    sp.add_argument("kind", choices=("sharp", "bullet"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--expand", type=int, metavar="D")
    sp.set_defaults(func=run_special)

    g = sub.add_parser("generators", parents=[common], help="randomized rank check of a generating set")
    g.add_argument("action", choices=("verify",))
    g.add_argument("--n", type=int)
    g.add_argument("--set", required=True, choices=sorted(GENERATOR_DEFAULTS))
    g.add_argument("--max-degree", type=int, required=True)
    g.set_defaults(func=run_generators)

    t = sub.add_parser("simtest", parents=[common], help="unitary similarity of two complex matrices")
    t.add_argument("--a", required=True, help="JSON file: rows of [re, im] pairs")
    t.add_argument("--b", required=True)
    t.add_argument("--tol", type=float, default=1e-8)
    t.add_argument("--exhaustive", type=int, metavar="L", help="check every word up to length L instead")
    t.set_defaults(func=run_simtest)

    v = sub.add_parser("verify", parents=[common], help="run identity checks and regressions")
    v.add_argument("target", nargs="?", choices=("all",))
    v.add_argument("--id", help="single identity check")
    v.add_argument("--n", type=int)
    v.add_argument("--budget", choices=("quick", "full"), default="quick")
    v.add_argument("--unbounded", action="store_true", help="include exact residue runs for n = 5, 6")
    v.set_defaults(func=run_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except UsageError as e:
        print(f"tracealg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        body = json.dumps(out.payload, sort_keys=True) + "\n"
    else:
        body = out.text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
