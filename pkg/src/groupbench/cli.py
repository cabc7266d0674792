"""Command-line interface.

One executable, one subcommand per area:

    groupbench sample     draw a word
    groupbench primitive  test one word for primitivity
    groupbench avgcase    Monte Carlo cost of a task over random words
    groupbench subwords   exact counts of words avoiding patterns
    groupbench matgrowth  entry growth of A/B matrix products
    groupbench hash       SL2(F_p) digests, collision bounds, BFS search
    groupbench wp         word problem solvers and their cost benchmark

Exit codes: 0 success, 2 invalid input, 3 refused by a work budget.
--csv writes the rows a command prints, --json prints them as JSON;
--seed fixes all randomness (default 0).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import bench, cayleyhash, matgrowth, subwords, wordproblem
from .errors import BudgetExceeded
from .whitehead import apply_auto, enumerate_whitehead_autos, primitivity_composite
from .words import (
    SamplingModel,
    count_reduced,
    cyclic_reduce,
    parse_word,
    render_word,
    sample_word,
)


def _common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="PRNG master seed")
    sub.add_argument("--csv", metavar="PATH", help="write result rows as CSV")
    sub.add_argument("--json", action="store_true", help="print result rows as JSON")


def _model(s: str) -> SamplingModel:
    return SamplingModel.from_key(s)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="groupbench", description=__doc__.split("\n")[0])
    subs = p.add_subparsers(dest="cmd", required=True)

    sp = subs.add_parser("sample", help="draw a uniform random word")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--model", type=_model, required=True,
                    help="all | reduced | cyclic")
    _common(sp)
    sp.set_defaults(func=cmd_sample)

    pp = subs.add_parser("primitive", help="primitivity of one word")
    pp.add_argument("--rank", type=int, required=True)
    pp.add_argument("--word", required=True)
    pp.add_argument("--trace", action="store_true",
                    help="print each length-reducing move of the descent")
    _common(pp)
    pp.set_defaults(func=cmd_primitive)

    ap = subs.add_parser("avgcase", help="Monte Carlo mean cost of a task")
    ap.add_argument("--task", required=True, choices=sorted(bench.TASKS))
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--n", type=int, required=True)
    ap.add_argument("--model", type=_model, required=True)
    ap.add_argument("--trials", type=int, default=1000)
    _common(ap)
    ap.set_defaults(func=cmd_avgcase)

    wp = subs.add_parser("subwords", help="count reduced words avoiding patterns")
    wp.add_argument("--rank", type=int, required=True)
    wp.add_argument("--forbidden", default="",
                    help="comma-separated patterns, e.g. 'aa,bb' (empty: none)")
    wp.add_argument("--maxlen", type=int, required=True)
    _common(wp)
    wp.set_defaults(func=cmd_subwords)

    mg = subs.add_parser("matgrowth", help="growth of A(x)/B(y) products")
    mgs = mg.add_subparsers(dest="mg_cmd", required=True)

    ex = mgs.add_parser("exhaustive", help="max |entry| over all words of length n")
    ex.add_argument("--n", type=int, required=True)
    _xy(ex)
    _common(ex)
    ex.set_defaults(func=cmd_mg_exhaustive)

    pt = mgs.add_parser("pattern", help="evaluate pattern^(n/len)")
    pt.add_argument("--pattern", required=True, help="bit string, e.g. 01 or 0110")
    pt.add_argument("--n", type=int, required=True)
    _xy(pt)
    _common(pt)
    pt.set_defaults(func=cmd_mg_pattern)

    rd = mgs.add_parser("random", help="log10 entry stats of random products")
    rd.add_argument("--n", type=int, required=True)
    rd.add_argument("--trials", type=int, default=1000)
    _xy(rd)
    _common(rd)
    rd.set_defaults(func=cmd_mg_random)

    av = mgs.add_parser("average", help="exact mean first row over all words")
    av.add_argument("--n", type=int, required=True)
    _xy(av)
    _common(av)
    av.set_defaults(func=cmd_mg_average)

    rl = mgs.add_parser("relation", help="do two words multiply to the same matrix?")
    rl.add_argument("--u", required=True)
    rl.add_argument("--v", required=True)
    _xy(rl)
    _common(rl)
    rl.set_defaults(func=cmd_mg_relation)

    hs = subs.add_parser("hash", help="Cayley hashing in SL2(F_p)")
    hss = hs.add_subparsers(dest="hash_cmd", required=True)

    dg = hss.add_parser("digest", help="hash a bit string")
    dg.add_argument("--p", type=int, required=True)
    _xy(dg)
    dg.add_argument("--bits", required=True)
    _common(dg)
    dg.set_defaults(func=cmd_hash_digest)

    bd = hss.add_parser("bound", help="certified collision-free length")
    bd.add_argument("--p", type=int, required=True)
    _xy(bd)
    _common(bd)
    bd.set_defaults(func=cmd_hash_bound)

    cl = hss.add_parser("collide", help="BFS for the shortest collision")
    cl.add_argument("--p", type=int, required=True)
    _xy(cl)
    cl.add_argument("--maxlen", type=int, required=True)
    _common(cl)
    cl.set_defaults(func=cmd_hash_collide)

    w = subs.add_parser("wp", help="word problem (free/abelian/heisenberg)")
    wsub = w.add_subparsers(dest="wp_cmd")
    w.add_argument("--group", choices=wordproblem.GROUPS)
    w.add_argument("--word")
    w.add_argument("--rank", type=int, default=2)
    w.add_argument("--trace", action="store_true",
                   help="show the tier path (exponent vector, coordinates)")
    _common(w)
    w.set_defaults(func=cmd_wp)

    wb = wsub.add_parser("bench", help="mean solver cost per length")
    wb.add_argument("--group", choices=wordproblem.GROUPS, required=True)
    wb.add_argument("--rank", type=int, default=2)
    wb.add_argument("--lens", required=True, help="comma-separated lengths")
    wb.add_argument("--trials", type=int, default=1000)
    _common(wb)
    wb.set_defaults(func=cmd_wp_bench)

    return p


def _xy(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--x", type=int, required=True)
    sub.add_argument("--y", type=int, required=True)


# ---------------------------------------------------------------------------
# output plumbing


def _cell(v: object) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_rows(args, rows: list[dict[str, object]], text: list[str]) -> None:
    """Print the human lines, honoring --json; write --csv if asked."""
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for line in text:
            print(line)
    if args.csv:
        if not rows:
            raise ValueError("nothing to write to CSV")
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            header = list(rows[0].keys())
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(row[k]) for k in header])


# ---------------------------------------------------------------------------
# subcommands


def cmd_sample(args) -> int:
    w = sample_word(args.rank, args.n, args.model, args.seed)
    rows = [{"rank": args.rank, "n": args.n, "model": args.model.key,
             "seed": args.seed, "word": render_word(w)}]
    emit_rows(args, rows, [render_word(w)])
    return 0


def cmd_primitive(args) -> int:
    w = parse_word(args.word, args.rank)
    if args.trace:
        _trace_descent(w)
    v = primitivity_composite(w)
    c = v.cost
    rows = [{
        "word": render_word(w), "rank": args.rank,
        "primitive": v.primitive, "decided_by": v.decided_by,
        "letters_read": c.letters_read, "edge_updates": c.edge_updates,
        "auto_applications": c.auto_applications,
        "letters_rewritten": c.letters_rewritten, "total_cost": c.total(),
    }]
    text = [
        f"{'primitive' if v.primitive else 'not primitive'} "
        f"(decided by {v.decided_by})",
        f"cost: letters_read={c.letters_read} edge_updates={c.edge_updates} "
        f"auto_applications={c.auto_applications} "
        f"letters_rewritten={c.letters_rewritten} total={c.total()}",
    ]
    emit_rows(args, rows, text)
    return 0


def _trace_descent(w) -> None:
    cur = cyclic_reduce(w)
    print(f"cyclically reduced: {render_word(cur)} (length {len(cur)})")
    autos = enumerate_whitehead_autos(w.rank)
    improved = True
    while improved and len(cur) > 1:
        improved = False
        for t in autos:
            img = cyclic_reduce(apply_auto(t, cur))
            if len(img) < len(cur):
                members = "{" + ",".join(
                    render_word(type(w)(w.rank, (m,))) for m in sorted(t.members)
                ) + "}"
                print(f"  ({render_word(type(w)(w.rank, (t.multiplier,)))}, "
                      f"{members}): {render_word(cur)} -> {render_word(img)}")
                cur = img
                improved = True
                break
    print(f"local minimum: {render_word(cur)} (length {len(cur)})")


def cmd_avgcase(args) -> int:
    rec = bench.avgcase_estimate(
        args.task, args.rank, args.n, args.model, args.trials, args.seed
    )
    rows = bench.record_rows(rec)
    text = [
        f"task={rec.task} model={rec.model} n={rec.n} trials={rec.trials} "
        f"seed={rec.seed}",
        f"mean={rec.mean_cost:.3f} std={rec.std_cost:.3f} p50={rec.p50} "
        f"p95={rec.p95} max={rec.max_cost}",
    ] + [
        f"  stratum {s.label}: freq={s.freq:.4f} mean={s.mean_cost:.3f}"
        for s in rec.strata
    ]
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for line in text:
            print(line)
    if args.csv:
        bench.emit_csv([rec], args.csv)
    return 0


def cmd_subwords(args) -> int:
    patterns = [
        parse_word(tok, args.rank)
        for tok in args.forbidden.split(",") if tok.strip()
    ]
    auto = subwords.build_avoidance_automaton(args.rank, patterns)
    rows = []
    text = [f"{'L':>4} {'avoiding':>16} {'reduced':>16} fraction"]
    for L in range(args.maxlen + 1):
        a = subwords.count_avoiding(auto, L)
        b = count_reduced(args.rank, L)
        frac = a / b
        rows.append({"L": L, "avoiding": a, "reduced": b, "fraction": frac})
        text.append(f"{L:>4} {a:>16} {b:>16} {frac:.6f}")
    emit_rows(args, rows, text)
    return 0


def cmd_mg_exhaustive(args) -> int:
    m, word = matgrowth.max_entry_exhaustive(args.n, args.x, args.y)
    bits = "".join(map(str, word))
    rows = [{"n": args.n, "x": args.x, "y": args.y,
             "max_entry": m, "argmax_word": bits}]
    emit_rows(args, rows, [f"max |entry| {m} attained by {bits or '(empty)'}"])
    return 0


def cmd_mg_pattern(args) -> int:
    m = matgrowth.pattern_power(args.pattern, args.n, args.x, args.y)
    rows = [{"pattern": args.pattern, "n": args.n, "x": args.x, "y": args.y,
             "a": m.a, "b": m.b, "c": m.c, "d": m.d, "max_entry": m.max_abs()}]
    emit_rows(args, rows, [f"[[{m.a}, {m.b}], [{m.c}, {m.d}]]",
                           f"max |entry| {m.max_abs()}"])
    return 0


def cmd_mg_random(args) -> int:
    st = matgrowth.random_product_stats(args.n, args.trials, args.x, args.y,
                                        args.seed)
    rows = [{
        "n": st.n, "trials": st.trials, "x": st.x, "y": st.y, "seed": st.seed,
        "mean_log10": st.mean_log10, "median_log10": st.median_log10,
        "min_log10": st.min_log10, "max_log10": st.max_log10,
        "base": float("nan") if st.base is None else st.base,
    }]
    base = "n/a" if st.base is None else f"{st.base:.6f}"
    emit_rows(args, rows, [
        f"n={st.n} trials={st.trials} (x={st.x}, y={st.y}, seed={st.seed})",
        f"log10 max entry: mean={st.mean_log10:.3f} median={st.median_log10:.3f} "
        f"min={st.min_log10:.3f} max={st.max_log10:.3f}",
        f"growth base: {base}",
    ])
    return 0


def cmd_mg_average(args) -> int:
    ea, eb = matgrowth.exact_average_entries(args.n, args.x, args.y)
    rows = [{"n": args.n, "x": args.x, "y": args.y,
             "mean_a": str(ea), "mean_b": str(eb)}]
    emit_rows(args, rows, [f"E[a_n] = {ea}", f"E[b_n] = {eb}"])
    return 0


def cmd_mg_relation(args) -> int:
    equal = matgrowth.check_relation(args.u, args.v, args.x, args.y)
    mu = matgrowth.eval_product(args.u, args.x, args.y)
    mv = matgrowth.eval_product(args.v, args.x, args.y)
    rows = [{"u": args.u, "v": args.v, "x": args.x, "y": args.y, "equal": equal,
             "u_value": str(mu.entries()), "v_value": str(mv.entries())}]
    emit_rows(args, rows, [
        f"{args.u} evaluates to {mu.entries()}",
        f"{args.v} evaluates to {mv.entries()}",
        "equal" if equal else "different",
    ])
    return 0


def cmd_hash_digest(args) -> int:
    h = cayleyhash.hash_bits(args.bits, args.p, args.x, args.y)
    rows = [{"p": args.p, "x": args.x, "y": args.y, "bits": args.bits,
             "a": h.a, "b": h.b, "c": h.c, "d": h.d}]
    emit_rows(args, rows, [f"{h.a} {h.b} {h.c} {h.d}"])
    return 0


def cmd_hash_bound(args) -> int:
    r = cayleyhash.collision_free_bound(args.p, args.x, args.y)
    rows = [{
        "p": r.p, "x": r.x, "y": r.y, "base": r.base,
        "exact_bound": -1 if r.exact_bound is None else r.exact_bound,
        "heuristic_bound": r.heuristic_bound, "pattern_based": r.pattern_based,
    }]
    exact = ("none (mixed signs: no certified bound)"
             if r.exact_bound is None else str(r.exact_bound))
    emit_rows(args, rows, [
        f"growth base ~ {r.base:.6f}",
        f"certified collision-free length: {exact}"
        + (" [pattern extrapolation]" if r.pattern_based else ""),
        f"heuristic length log_base(p) ~ {r.heuristic_bound:.2f}",
    ])
    return 0


def cmd_hash_collide(args) -> int:
    res = cayleyhash.shortest_collision_bfs(args.p, args.x, args.y, args.maxlen)
    if res is None:
        rows = [{"p": args.p, "x": args.x, "y": args.y, "maxlen": args.maxlen,
                 "collision_length": -1, "word1": "", "word2": ""}]
        emit_rows(args, rows,
                  [f"no collision among equal-length words up to length {args.maxlen}"])
        return 0
    length, (w1, w2) = res
    b1 = "".join(map(str, w1))
    b2 = "".join(map(str, w2))
    rows = [{"p": args.p, "x": args.x, "y": args.y, "maxlen": args.maxlen,
             "collision_length": length, "word1": b1, "word2": b2}]
    emit_rows(args, rows, [f"collision at length {length}: {b1} vs {b2}"])
    return 0


def cmd_wp(args) -> int:
    if args.wp_cmd == "bench":
        return cmd_wp_bench(args)
    if not args.group or args.word is None:
        raise ValueError("wp needs --group and --word (or the bench subcommand)")
    rank = 2 if args.group == "heisenberg" else args.rank
    w = parse_word(args.word, rank)
    if args.trace:
        vec = wordproblem.abelianization(w)
        print(f"exponent vector: {vec}")
        if args.group == "heisenberg" and not any(vec):
            e = wordproblem.heisenberg_eval(w)
            print(f"exact coordinates: ({e.a}, {e.b}, {e.c})")
    v = wordproblem.wp_composite(args.group, w)
    rows = [{
        "group": args.group, "word": render_word(w),
        "is_identity": v.is_identity, "decided_by": v.decided_by,
        "letters_read": v.cost.letters_read, "arith_units": v.cost.arith_units,
        "total_cost": v.cost.total(),
    }]
    text = [
        f"{'identity' if v.is_identity else 'not the identity'} "
        f"(decided by {v.decided_by})",
        f"cost: letters_read={v.cost.letters_read} "
        f"arith_units={v.cost.arith_units} total={v.cost.total()}",
    ]
    emit_rows(args, rows, text)
    return 0


def cmd_wp_bench(args) -> int:
    try:
        lens = [int(tok) for tok in args.lens.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"--lens must be comma-separated integers, got {args.lens!r}")
    if not lens:
        raise ValueError("--lens is empty")
    records = []
    text = []
    for n in lens:
        rec = bench.avgcase_estimate(
            f"wp_{args.group}", args.rank, n, SamplingModel.ALL_WORDS,
            args.trials, args.seed,
        )
        records.append(rec)
        strata = " ".join(f"{s.label}:freq={s.freq:.4f},mean={s.mean_cost:.2f}"
                          for s in rec.strata)
        text.append(f"n={n:>6} mean={rec.mean_cost:.3f} std={rec.std_cost:.3f} "
                    f"p95={rec.p95} {strata}")
    rows = [row for rec in records for row in bench.record_rows(rec)]
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for line in text:
            print(line)
    if args.csv:
        bench.emit_csv(records, args.csv)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
