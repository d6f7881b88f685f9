"""Command-line harness: construct, exact, verify, gen, experiment.

Inputs are Newick strings (any argument containing ';') or paths to
Newick files.  All randomness flows from --seed (or MASTKIT_SEED), so
identical invocations produce byte-identical output; the experiment
subcommand keeps its millis column at 0 unless --timing wall is given,
for the same reason.

Exit codes: 0 success, 2 parse or usage failure, 3 taxon-set mismatch,
4 size cap exceeded, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from typing import Optional

from .construction import (
    BLOCK_TREE,
    ConstructionOutcome,
    UNROOTED_CATERPILLAR,
    main_construct,
    setup,
    verify_agreement,
    verify_outcome,
    weak_construct,
)
from .exact import SizeCapExceeded, brute_force_mast, rooted_mast, unrooted_mast
from .generators import GenSpec, MODELS, adversarial_pair, generate
from .newick import NewickError, parse_newick, write_newick
from .rng import SplitMix64, mix64
from .trees import RootedTree, TaxaMismatch, TreeError, UnrootedTree, sorted_labels

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_TAXA = 3
EXIT_CAP = 4
EXIT_VERIFY = 5

CSV_FIELDS = ("n", "seed", "generator", "algorithm", "size", "kind",
              "branch", "verified", "millis")

PAIR_MODELS = ("uniform", "adversarial")


def _load_tree(value: str, rooted: bool):
    if ";" in value:
        text = value
    else:
        try:
            with open(value, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise NewickError(f"cannot read tree file {value!r}: {err}", 0)
    return parse_newick(text, rooted=rooted)


def _emit(args, report: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(report, sort_keys=True))
    else:
        for key in sorted(report):
            value = report[key]
            if isinstance(value, list):
                value = " ".join(value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            print(f"{key}: {value}")


def _tiny_outcome(tree1: UnrootedTree, tree2: UnrootedTree) -> ConstructionOutcome:
    # Up to three taxa admit a single unrooted shape, so everything agrees.
    if tree1.taxa != tree2.taxa:
        raise TaxaMismatch("input trees must share their taxon set")
    return ConstructionOutcome(frozenset(tree1.taxa), UNROOTED_CATERPILLAR,
                               "tiny", float(len(tree1)), None)


def _run_construction(tree1: UnrootedTree, tree2: UnrootedTree,
                      algorithm: str, c: Optional[int], orient: str,
                      rng: Optional[SplitMix64]) -> ConstructionOutcome:
    if len(tree1) < 4:
        return _tiny_outcome(tree1, tree2)
    if algorithm == "weak":
        state, _, _ = setup(tree1, tree2, orient=orient, rng=rng)
        return weak_construct(state.tree1, state.tree2,
                              n_param=len(tree1), c=c if c else 4)
    return main_construct(tree1, tree2, c=c if c else 40,
                          orient=orient, rng=rng)


def _cmd_construct(args) -> int:
    tree1 = _load_tree(args.t1, rooted=False)
    tree2 = _load_tree(args.t2, rooted=False)
    rng = SplitMix64(mix64(args.seed, 1)) if args.orient == "random" else None
    outcome = _run_construction(tree1, tree2, args.algorithm, args.big_c,
                                args.orient, rng)
    verified = verify_outcome(tree1, tree2, outcome)
    _emit(args, {
        "n": len(tree1),
        "algorithm": args.algorithm,
        "size": len(outcome.agreement_set),
        "kind": outcome.kind,
        "branch": outcome.branch,
        "claimed_bound": round(outcome.claimed_bound, 6),
        "verified": verified,
        "agreement": sorted_labels(outcome.agreement_set),
    })
    return EXIT_OK if verified else EXIT_VERIFY


def _cmd_exact(args) -> int:
    tree1 = _load_tree(args.t1, rooted=args.rooted)
    tree2 = _load_tree(args.t2, rooted=args.rooted)
    n = len(tree1)
    if args.method == "brute":
        cap = args.cap if args.cap else 10
        result = brute_force_mast(tree1, tree2, cap=cap)
    else:
        cap = args.cap if args.cap else (2048 if args.rooted else 512)
        if n > cap:
            raise SizeCapExceeded(n, cap)
        if args.rooted:
            result = rooted_mast(tree1, tree2)
        else:
            result = unrooted_mast(tree1, tree2)
    _emit(args, {
        "n": n,
        "method": args.method,
        "rooted": args.rooted,
        "size": result.size,
        "agreement": sorted_labels(result.agreement_set),
        "witness": write_newick(result.witness),
    })
    return EXIT_OK


def _cmd_verify(args) -> int:
    tree1 = _load_tree(args.t1, rooted=args.rooted)
    tree2 = _load_tree(args.t2, rooted=args.rooted)
    leaves = [part.strip() for part in args.leaves.split(",") if part.strip()]
    kind = BLOCK_TREE if args.rooted else UNROOTED_CATERPILLAR
    ok = verify_agreement(tree1, tree2, leaves, kind)
    _emit(args, {"verified": ok, "size": len(set(leaves))})
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_gen(args) -> int:
    if args.model == "adversarial":
        pair = adversarial_pair(args.n, args.seed)
        lines = [write_newick(pair[0]), write_newick(pair[1])]
    else:
        lines = [write_newick(generate(GenSpec(args.model, args.n, args.seed)))]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _experiment_grid(args) -> list[int]:
    sizes = []
    n = args.n_min
    while n <= args.n_max:
        sizes.append(n)
        n *= args.step_factor
    return sizes


def _make_pair(model: str, n: int, seed: int):
    if model == "adversarial":
        return adversarial_pair(n, seed)
    return (generate(GenSpec("uniform", n, mix64(seed, 1))),
            generate(GenSpec("uniform", n, mix64(seed, 2))))


def _cmd_experiment(args) -> int:
    models = tuple(m.strip() for m in args.models.split(",") if m.strip())
    for model in models:
        if model not in PAIR_MODELS:
            raise NewickError(f"unknown pair model {model!r}", 0)
    grid = _experiment_grid(args)
    if not grid or grid[0] < 4:
        raise NewickError("experiment sizes must start at 4 or more", 0)
    if "adversarial" in models:
        for n in grid:
            if n & (n - 1):
                raise NewickError(
                    f"adversarial model needs power-of-two sizes, got {n}", 0)
    rows: list[dict] = []
    failed = False
    out = sys.stdout if args.out == "-" else open(args.out, "w",
                                                  encoding="utf-8", newline="")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for n in grid:
            for model_index, model in enumerate(models):
                for trial in range(args.trials):
                    seed = mix64(args.seed, n, model_index, trial)
                    tree1, tree2 = _make_pair(model, n, seed)
                    for algorithm in ("weak", "main", "exact_dp"):
                        if algorithm == "exact_dp" and n > args.cap:
                            continue
                        row = _run_experiment_row(
                            tree1, tree2, algorithm, n, seed, model,
                            args.timing == "wall")
                        rows.append(row)
                        writer.writerow([row[f] for f in CSV_FIELDS])
                        if row["verified"] != "true":
                            failed = True
                            break
                    if failed:
                        break
                if failed:
                    break
            if failed:
                break
    finally:
        if out is not sys.stdout:
            out.close()
    main_sizes = [(r["size"], r["n"]) for r in rows if r["algorithm"] == "main"]
    if main_sizes:
        ratio = min(size / math.log2(n) for size, n in main_sizes)
        print(f"min-main-ratio: {ratio:.6f}")
    if args.json:
        print(json.dumps(rows, sort_keys=True))
    if failed:
        print("error: a run failed verification", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _run_experiment_row(tree1, tree2, algorithm, n, seed, model,
                        timing: bool) -> dict:
    start = time.perf_counter() if timing else 0.0
    if algorithm == "exact_dp":
        result = unrooted_mast(tree1, tree2)
        size = result.size
        kind = "exact"
        branch = "dp"
        verified = verify_agreement(tree1, tree2, result.agreement_set,
                                    UNROOTED_CATERPILLAR)
    else:
        outcome = _run_construction(tree1, tree2, algorithm, None,
                                    "min_label", None)
        size = len(outcome.agreement_set)
        kind = outcome.kind
        branch = outcome.branch
        verified = verify_outcome(tree1, tree2, outcome)
    millis = int((time.perf_counter() - start) * 1000) if timing else 0
    return {
        "n": n,
        "seed": seed,
        "generator": model,
        "algorithm": algorithm,
        "size": size,
        "kind": kind,
        "branch": branch,
        "verified": "true" if verified else "false",
        "millis": millis,
    }


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mastkit",
        description="build, check, and measure agreement subtrees")
    parser.set_defaults(func=None)
    default_seed = int(os.environ.get("MASTKIT_SEED", "0"))
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("construct", help="run a construction algorithm")
    p.add_argument("--t1", required=True, help="first tree (Newick or path)")
    p.add_argument("--t2", required=True, help="second tree (Newick or path)")
    p.add_argument("--algorithm", choices=("weak", "main"), default="main")
    p.add_argument("--C", dest="big_c", type=int, default=None,
                   help="shrink-fraction constant (default 4 weak, 40 main)")
    p.add_argument("--orient", choices=("min_label", "random"),
                   default="min_label")
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("exact", help="solve maximum agreement exactly")
    p.add_argument("--t1", required=True)
    p.add_argument("--t2", required=True)
    p.add_argument("--method", choices=("dp", "brute"), default="dp")
    p.add_argument("--rooted", action="store_true")
    p.add_argument("--cap", type=int, default=None,
                   help="leaf cap (default: dp 512 unrooted / 2048 rooted, brute 10)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("verify", help="check a claimed agreement set")
    p.add_argument("--t1", required=True)
    p.add_argument("--t2", required=True)
    p.add_argument("--leaves", required=True,
                   help="comma-separated taxon labels")
    p.add_argument("--rooted", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="generate seeded trees")
    p.add_argument("--model", choices=MODELS + ("adversarial",),
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("experiment", help="run a size/seed grid to CSV")
    p.add_argument("--n-min", dest="n_min", type=int, required=True)
    p.add_argument("--n-max", dest="n_max", type=int, required=True)
    p.add_argument("--step-factor", dest="step_factor", type=int, default=2)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--models", default="uniform,adversarial")
    p.add_argument("--out", default="-")
    p.add_argument("--cap", type=int, default=512,
                   help="largest n solved exactly")
    p.add_argument("--timing", choices=("off", "wall"), default="off")
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.func is None:
        parser.print_help()
        return EXIT_PARSE
    try:
        return args.func(args)
    except NewickError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except TaxaMismatch as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_TAXA
    except SizeCapExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CAP
    except TreeError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
