"""Command line harness: generators, threshold reports, certified
constructions, certificate verification, parameter sweeps.

Exit codes: 0 success, 1 usage or parse error, 2 retry budget exhausted,
3 certificate verification failure.  Rationals are given as ``p`` or
``p/q``; floats are rejected so the strict threshold semantics survive
the command line.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import construction, correlation, f2n, subspace
from .construction import (
    BoundaryAmbiguous,
    Budgets,
    Certificate,
    DegenerateInput,
    RetryExhausted,
    VerificationError,
)
from .rng import SplitMix64

_RATIONAL = re.compile(r"^([0-9]+)(?:/([1-9][0-9]*))?$")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise _UsageError(message)


def rational(text: str) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise argparse.ArgumentTypeError(
            f"expected a rational like 3/4 (floats are rejected), got {text!r}"
        )
    return Fraction(int(m.group(1)), int(m.group(2)) if m.group(2) else 1)


def _rational_list(text: str) -> list[Fraction]:
    return [rational(part) for part in text.split(",")]


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",")]


def _build_parser() -> _Parser:
    p = _Parser(prog="popdiff", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a set and write it as F2SET v1")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--family", choices=["random", "subspace", "niveau"], required=True)
    g.add_argument("--card", type=int, help="cardinality (random family)")
    g.add_argument("--alpha", type=rational, help="density, alternative to --card")
    g.add_argument("--seed", type=int, default=0, help="seed (random family)")
    g.add_argument("--dim", type=int, help="dimension (subspace family)")
    g.add_argument("--wmin", type=int, help="weight threshold (niveau family)")
    g.add_argument("--out", required=True)

    d = sub.add_parser("dcset", help="compute the popular difference set")
    d.add_argument("input", help="F2SET file holding A")
    d.add_argument("--c", type=rational, required=True)
    d.add_argument("--out", help="write D_c(A) as F2SET")
    d.add_argument("--counts-csv", help="dump the autocorrelation as x,count rows")

    c = sub.add_parser("construct", help="build a certified A' with A'+A' inside D_c(A)")
    c.add_argument("input", help="F2SET file holding A")
    c.add_argument("--c", type=rational, required=True)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--out", required=True, help="certificate path (JSON)")
    c.add_argument("--lemma-trials", type=int, default=construction.DEFAULT_TRIALS)
    c.add_argument("--refine-trials", type=int, default=construction.DEFAULT_TRIALS)
    c.add_argument("--exploratory", action="store_true", help="allow 1/2 < c < 1")

    v = sub.add_parser("verify", help="independently re-verify a certificate")
    v.add_argument("certificate")

    b = sub.add_parser("bound", help="closed-form size bound")
    b.add_argument("n", type=int)
    b.add_argument("alpha", type=rational)
    b.add_argument("c", type=rational)

    s = sub.add_parser("sweep", help="run a parameter grid and write a CSV")
    s.add_argument("--n", type=_int_list, required=True, help="comma separated")
    s.add_argument("--alpha", type=_rational_list, required=True)
    s.add_argument("--c", type=_rational_list, required=True)
    s.add_argument("--family", choices=["random", "subspace", "niveau"], default="random")
    s.add_argument("--seeds", type=int, default=1, help="seeds per cell")
    s.add_argument("--lemma-trials", type=int, default=construction.DEFAULT_TRIALS)
    s.add_argument("--refine-trials", type=int, default=construction.DEFAULT_TRIALS)
    s.add_argument("--subspace-cap", type=int, default=14,
                   help="max n for the exact subspace-dimension column")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", required=True)

    m = sub.add_parser("maxsub", help="largest linear subspace inside a set")
    m.add_argument("input", help="F2SET file")

    return p


def cmd_gen(args) -> int:
    if args.family == "random":
        if (args.card is None) == (args.alpha is None):
            raise _UsageError("random family needs exactly one of --card / --alpha")
        if args.card is not None:
            card = args.card
        else:
            card = args.alpha * (1 << args.n)
            if card.denominator != 1:
                raise _UsageError(f"alpha * 2^n = {card} is not an integer")
            card = int(card)
        out = f2n.random_set(args.n, card, SplitMix64(args.seed))
    elif args.family == "subspace":
        if args.dim is None:
            raise _UsageError("subspace family needs --dim")
        if not 0 <= args.dim <= args.n:
            raise _UsageError(f"subspace dimension {args.dim} out of range")
        out = f2n.linear_subspace(args.n, [1 << i for i in range(args.dim)])
    else:
        if args.wmin is None:
            raise _UsageError("niveau family needs --wmin")
        out = f2n.niveau_set(args.n, args.wmin)
    f2n.write_set(out, args.out)
    print(f"wrote {args.out}: n={out.n} card={out.card} density={out.density}")
    return 0


def cmd_dcset(args) -> int:
    a = f2n.read_set(args.input)
    report = correlation.dc_threshold_report(a, args.c)
    print(report.describe())
    ac = correlation.autocorrelation(a)
    if args.out:
        f2n.write_set(ac.popular_set(args.c), args.out)
        print(f"wrote {args.out}")
    if args.counts_csv:
        ac.write_csv(args.counts_csv)
        print(f"wrote {args.counts_csv}")
    return 0


def cmd_construct(args) -> int:
    a = f2n.read_set(args.input)
    budgets = Budgets(args.lemma_trials, args.refine_trials)
    cert = construction.construct_popular_sumset(
        a, args.c, args.seed, budgets, exploratory=args.exploratory
    )
    cert.write(args.out)
    plan = cert.plan
    print(
        f"wrote {args.out}: |A'|={cert.a2.card} guarantee={plan.guarantee} "
        f"sigma={plan.sigma} r={plan.r} trivial={plan.trivial} verified={cert.verified}"
    )
    return 0


def cmd_verify(args) -> int:
    from pathlib import Path

    try:
        text = Path(args.certificate).read_bytes().decode("ascii")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"cannot read certificate: {exc}", file=sys.stderr)
        return 1
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        print(f"verification check 'schema' failed: not JSON ({exc})", file=sys.stderr)
        return 3
    try:
        cert = Certificate.from_json_obj(obj)
    except (ValueError, KeyError, TypeError) as exc:
        print(f"verification check 'schema' failed: {exc}", file=sys.stderr)
        return 3
    try:
        construction.verify_certificate(cert)
    except VerificationError as exc:
        print(f"verification check {exc.check!r} failed: {exc.detail}", file=sys.stderr)
        return 3
    print(
        f"certificate ok: n={cert.n} c={cert.c} |A'|={cert.a2.card} "
        f"guarantee={cert.plan.guarantee}"
    )
    return 0


def cmd_bound(args) -> int:
    print(construction.theorem_bound(args.n, args.alpha, args.c))
    return 0


def cmd_maxsub(args) -> int:
    a = f2n.read_set(args.input)
    if a.n > subspace.SEARCH_DIM_CAP:
        raise _UsageError(
            f"exact subspace search is capped at n={subspace.SEARCH_DIM_CAP}"
        )
    result = subspace.max_subspace_in(a)
    if not result.zero_in_set:
        print("0 is not in the set; no subspace fits (dimension 0)")
        return 0
    basis = result.basis
    hex_basis = " ".join(f"{v:x}" for v in basis.vectors)
    print(f"dimension={basis.dim} cardinality={basis.cardinality} basis=[{hex_basis}]")
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = [
    "n", "alpha", "c", "family", "seed", "card_a", "card_d", "subspace_dim",
    "guarantee", "achieved", "theorem_bound", "bound_ok", "success", "reason",
]


def _cell_seed(config_key: str, index: int) -> int:
    digest = hashlib.sha256(
        config_key.encode("ascii") + b"\x00" + index.to_bytes(8, "big")
    ).digest()
    return int.from_bytes(digest[:8], "big")


def _niveau_threshold(n: int, budget: int) -> int | None:
    """Smallest weight threshold whose niveau set has at most ``budget``
    points; None when even the all-ones singleton overshoots (budget 0)."""
    from math import comb

    for w in range(n + 2):
        size = sum(comb(n, j) for j in range(w, n + 1))
        if size <= budget:
            return w if size > 0 else None
    return None


def _sweep_cell(n: int, alpha: Fraction, c: Fraction, family: str, seed_idx: int,
                cell_seed: int, budgets: Budgets, sub_cap: int) -> dict:
    row = {col: "" for col in SWEEP_COLUMNS}
    row.update(n=n, alpha=str(alpha), c=str(c), family=family, seed=seed_idx)

    card_exact = alpha * (1 << n)
    if card_exact.denominator != 1:
        row["reason"] = "alpha*2^n is not an integer"
        return row
    card = int(card_exact)

    if family == "random":
        a = f2n.random_set(n, card, SplitMix64(cell_seed))
    elif family == "subspace":
        if card.bit_count() != 1:
            row["reason"] = "subspace family needs a power-of-two cardinality"
            return row
        a = f2n.linear_subspace(n, [1 << i for i in range(card.bit_length() - 1)])
    else:
        wmin = _niveau_threshold(n, card)
        if wmin is None:
            row["reason"] = "niveau family cannot fit the density budget"
            return row
        a = f2n.niveau_set(n, wmin)
    if a.card == 0:
        row["reason"] = "empty set"
        return row
    row["card_a"] = a.card

    d = correlation.popular_difference_set(a, c)
    row["card_d"] = d.card
    if n <= sub_cap:
        row["subspace_dim"] = subspace.max_subspace_in(d).dim

    if 0 < c < 1:
        try:
            row["theorem_bound"] = construction.theorem_bound(n, a.density, c)
        except BoundaryAmbiguous:
            row["theorem_bound"] = ""
        try:
            cert = construction.construct_popular_sumset(
                a, c, cell_seed, budgets, exploratory=True
            )
            row["guarantee"] = cert.plan.guarantee
            row["achieved"] = cert.a2.card
            row["success"] = "true"
        except RetryExhausted as exc:
            row["success"] = "false"
            row["reason"] = f"retry exhausted at stage {exc.stage}"
        except DegenerateInput as exc:
            row["success"] = "false"
            row["reason"] = str(exc)
        if row["guarantee"] != "" and row["theorem_bound"] != "":
            row["bound_ok"] = "true" if row["guarantee"] >= row["theorem_bound"] else "false"
    else:
        row["reason"] = "construction requires 0 < c < 1"
    return row


def cmd_sweep(args) -> int:
    budgets = Budgets(args.lemma_trials, args.refine_trials)
    config_key = json.dumps(
        {
            "n": args.n,
            "alpha": [str(x) for x in args.alpha],
            "c": [str(x) for x in args.c],
            "family": args.family,
            "seeds": args.seeds,
            "budgets": [budgets.lemma_trials, budgets.refine_trials],
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    cells = [
        (n, alpha, c, seed_idx)
        for n in args.n
        for alpha in args.alpha
        for c in args.c
        for seed_idx in range(args.seeds)
    ]

    def run(indexed):
        index, (n, alpha, c, seed_idx) = indexed
        return _sweep_cell(
            n, alpha, c, args.family, seed_idx,
            _cell_seed(config_key, index), budgets, args.subspace_cap,
        )

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(run, enumerate(cells)))
    else:
        rows = [run(item) for item in enumerate(cells)]

    with open(args.out, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {args.out}: {len(rows)} rows")
    return 0


_COMMANDS = {
    "gen": cmd_gen,
    "dcset": cmd_dcset,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "bound": cmd_bound,
    "sweep": cmd_sweep,
    "maxsub": cmd_maxsub,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RetryExhausted as exc:
        print(
            f"stage {exc.stage!r} exhausted {exc.trials} trials "
            f"(best deficit {exc.best_deficit})",
            file=sys.stderr,
        )
        return 2
    except (ValueError, DegenerateInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
