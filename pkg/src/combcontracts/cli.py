"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 unreadable or invalid input,
3 problem too large, 4 algorithm not certified for the instance under
``--strict``, 5 rejection sampling budget exhausted, 6 a count bound was
violated.  Set ``CONTRACTS_LOG`` to ``error``, ``info`` or ``trace`` to
control diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import generators as gen
from . import io
from .classes import ClassReport, classify, structural_classes
from .contracts import (
    brute_force_critical_values,
    count_bound,
    enumerate_critical_values,
    optimal_contract,
)
from .costs import Instance
from .demand import ALGORITHMS, BRUTE_FORCE_MAX_N, REQUIREMENTS, make_oracle
from .errors import CapacityError, ContractsError, InputError, OracleError
from .functions import truncate
from .sets import format_rational, format_set, parse_rational

log = logging.getLogger("combcontracts")

EXIT_OK, EXIT_INTERNAL, EXIT_PARSE, EXIT_CAPACITY, EXIT_MISMATCH, EXIT_BUDGET, EXIT_BOUND = 0, 1, 2, 3, 4, 5, 6
CERTIFY_MAX_N = 10
LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "trace": logging.DEBUG}


class Mismatch(ContractsError):
    pass


def _setup_logging():
    level = LOG_LEVELS.get(os.environ.get("CONTRACTS_LOG", "").strip().lower(), logging.WARNING)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(level)
    log.propagate = False


def _emit(payload: dict, output: str):
    if output == "json":
        print(json.dumps(payload, sort_keys=True))
        return
    for k, v in payload.items():
        if isinstance(v, (list, dict)):
            v = json.dumps(v)
        print(f"{k:<22}{v}")


# --- certification -------------------------------------------------------------


def reward_classes(inst: Instance) -> frozenset[str] | None:
    """Classes of the reward: by construction when known, else by exhaustive check for small n."""
    known = structural_classes(inst.reward)
    if known is not None:
        log.debug("reward classes known by construction: %s", sorted(known))
        return known
    if inst.n <= CERTIFY_MAX_N:
        rep = classify(inst.reward)
        found = frozenset(k for k in ("monotone", "submodular", "ultra", "gs", "wwl") if getattr(rep, k))
        log.debug("reward classes certified exhaustively: %s", sorted(found))
        return found
    return None


def _cost_ok(inst: Instance, shape: str) -> bool:
    if shape == "additive":
        return inst.cost.is_additive
    if shape == "symmetric":
        return inst.cost.is_symmetric
    return True


def auto_algorithm(inst: Instance) -> str:
    classes = reward_classes(inst)
    if classes is None:
        return "brute"
    c = inst.cost
    if c.is_additive and "ultra" in classes:
        return "ultra2"
    if c.is_additive and "gs" in classes:
        return "gs2"
    if c.is_symmetric and "wwl" in classes:
        return "wwl"
    if "ultra" in classes:
        return "ultra-spa"
    if "gs" in classes:
        return "gs-spa"
    return "brute"


def resolve_algorithm(inst: Instance, name: str, strict: bool) -> str:
    """Return the algorithm to run, applying certification and fallback rules."""
    if name == "auto":
        name = auto_algorithm(inst)
        log.info("auto-selected demand algorithm %s", name)
    if name not in ALGORITHMS:
        raise InputError(f"unknown demand algorithm {name!r}; choose from auto, {', '.join(ALGORITHMS)}")
    if name == "brute":
        return name
    need_class, need_cost = REQUIREMENTS[name]
    problems = []
    if not _cost_ok(inst, need_cost):
        problems.append(f"cost is not {need_cost}")
    classes = reward_classes(inst)
    if classes is None:
        if strict:
            raise Mismatch(f"cannot certify the reward as {need_class} for n = {inst.n}")
        log.warning("reward class %s is uncertified for n = %d; running %s anyway", need_class, inst.n, name)
    elif need_class not in classes:
        problems.append(f"reward is not {need_class}")
    if not problems:
        return name
    msg = f"algorithm {name} needs reward class {need_class} and cost shape {need_cost}: " + "; ".join(problems)
    if strict:
        raise Mismatch(msg)
    if inst.n > BRUTE_FORCE_MAX_N:
        if not _cost_ok(inst, need_cost):
            raise Mismatch(msg)
        log.warning("%s; brute force is out of reach, running %s uncertified", msg, name)
        return name
    log.warning("%s; falling back to brute force", msg)
    return "brute"


# --- commands --------------------------------------------------------------------


def cmd_classify(args) -> int:
    inst = io.load(args.instance)
    rep: ClassReport = classify(inst.reward)
    _emit(rep.to_dict(), args.output)
    return EXIT_OK


def cmd_demand(args) -> int:
    inst = io.load(args.instance)
    alpha = parse_rational(args.alpha)
    name = resolve_algorithm(inst, args.algorithm, args.strict)
    res = make_oracle(name, inst)(alpha)
    out = res.to_dict()
    out["algorithm"] = name
    if args.output == "table":
        out["set"] = format_set(res.chosen)
    _emit(out, args.output)
    return EXIT_OK


def _schedule(inst: Instance, name: str):
    if name == "brute":
        return brute_force_critical_values(inst.reward, inst.cost)
    return enumerate_critical_values(inst.reward, inst.cost, make_oracle(name, inst))


def cmd_critical_values(args) -> int:
    inst = io.load(args.instance)
    name = resolve_algorithm(inst, args.algorithm, args.strict)
    sched = _schedule(inst, name)
    out = sched.to_dict()
    if args.output == "table":
        out = {"algorithm": name, "initial": format_set(sched.initial), "count": len(sched)}
        for k, b in enumerate(sched.breakpoints, 1):
            out[f"alpha_{k}"] = f"{format_rational(b.alpha)}  {format_set(b.before)} -> {format_set(b.after)}"
    _emit(out, args.output)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = io.load(args.instance)
    name = resolve_algorithm(inst, args.algorithm, args.strict)
    sched = _schedule(inst, name)
    opt = optimal_contract(inst.reward, inst.cost, schedule=sched)
    out = opt.to_dict()
    out["algorithm"] = name
    if args.output == "table":
        out["best_response"] = format_set(opt.best_response)
    _emit(out, args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    inst = gen.instance(args.reward_class, args.n, args.seed, args.cost)
    text = io.dumps(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


BOUND_CLASSES = {
    "ultra+additive": ("ultra_additive", gen.ultra_mixed, gen.additive_cost),
    "gs+spa": ("spa", gen.gs, gen.spa_cost),
    "ultra+spa": ("spa", gen.ultra_mixed, gen.spa_cost),
    "wwl+symmetric": ("symmetric_cost", gen.wwl, gen.symmetric_cost),
    "truncated": ("truncated", None, gen.additive_cost),
}


def bound_trial(cls: str, n: int, seed: int, k: int) -> int:
    """Brute-force critical-value count of the ``k``-th instance of a bound experiment."""
    kind, make_f, make_c = BOUND_CLASSES[cls]
    rng = random.Random(seed * 1_000_003 + k)
    if cls == "truncated":
        f = truncate(gen.ultra_mixed(n, rng), rng.randint(1, n))
    else:
        f = make_f(n, rng)
    return len(brute_force_critical_values(f, make_c(n, rng)))


def cmd_verify_bounds(args) -> int:
    if args.reward_class not in BOUND_CLASSES:
        raise InputError(f"unknown class {args.reward_class!r}; choose from {', '.join(BOUND_CLASSES)}")
    if not 1 <= args.n <= 10:
        raise CapacityError(f"verify-bounds supports 1 <= n <= 10, got {args.n}")
    kind = BOUND_CLASSES[args.reward_class][0]
    bound = count_bound(kind, args.n)
    jobs = [(args.reward_class, args.n, args.seed, k) for k in range(args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            counts = list(ex.map(bound_trial, *zip(*jobs)))
    else:
        counts = [bound_trial(*j) for j in jobs]
    worst = max(counts, default=0)
    out = {
        "class": args.reward_class,
        "n": args.n,
        "count": args.count,
        "seed": args.seed,
        "bound": bound,
        "max_observed": worst,
        "mean_observed": format_rational(Fraction(sum(counts), len(counts))) if counts else "0/1",
        "violations": sum(c > bound for c in counts),
    }
    _emit(out, args.output)
    if worst > bound:
        log.error("observed %d critical values, above the bound %d", worst, bound)
        return EXIT_BOUND
    return EXIT_OK


def cmd_bench(args) -> int:
    inst = io.load(args.instance)
    name = resolve_algorithm(inst, args.algorithm, args.strict)
    times = []
    for _ in range(args.repeat):
        t0 = time.perf_counter()
        sched = _schedule(inst, name)
        optimal_contract(inst.reward, inst.cost, schedule=sched)
        times.append(time.perf_counter() - t0)
    out = {
        "algorithm": name,
        "n": inst.n,
        "critical_values": len(sched),
        "repeat": args.repeat,
        "best_seconds": round(min(times), 6),
        "mean_seconds": round(sum(times) / len(times), 6),
    }
    _emit(out, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combcontracts",
        description="Optimal linear contracts for combinatorial actions.",
        epilog=__doc__.split("\n\n", 1)[1].replace("``", ""),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--output", choices=("json", "table"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_instance(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("instance", help="instance JSON file")
        p.add_argument("--output", choices=("json", "table"), default=argparse.SUPPRESS)
        return p

    def with_algorithm(p, default):
        p.add_argument("--algorithm", default=default, help=f"auto or one of: {', '.join(ALGORITHMS)}")
        p.add_argument("--strict", action="store_true", help="fail instead of falling back on class mismatch")

    p = with_instance("classify", "report class membership of the reward")
    p.set_defaults(func=cmd_classify)

    p = with_instance("demand", "answer one demand query")
    p.add_argument("--alpha", required=True, help="contract as p/q")
    with_algorithm(p, "auto")
    p.set_defaults(func=cmd_demand)

    p = with_instance("critical-values", "list the critical values and best responses")
    with_algorithm(p, "auto")
    p.set_defaults(func=cmd_critical_values)

    p = with_instance("solve", "compute the optimal linear contract")
    with_algorithm(p, "auto")
    p.set_defaults(func=cmd_solve)

    p = with_instance("bench", "time schedule enumeration and solving")
    with_algorithm(p, "auto")
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="emit a random instance")
    p.add_argument("--class", dest="reward_class", required=True, choices=sorted(gen.REWARDS))
    p.add_argument("--cost", default="additive", choices=sorted(gen.COSTS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify-bounds", help="check critical-value counts against their bound")
    p.add_argument("--class", dest="reward_class", required=True, choices=sorted(BOUND_CLASSES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", choices=("json", "table"), default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_bounds)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except gen.RejectionBudgetExhausted as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except CapacityError as exc:
        log.error("%s", exc)
        return EXIT_CAPACITY
    except Mismatch as exc:
        log.error("%s", exc)
        return EXIT_MISMATCH
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    except OracleError as exc:
        log.error("%s", exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
