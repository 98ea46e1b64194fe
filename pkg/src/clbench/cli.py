"""Command-line entry point.

Exit codes: 0 success, 1 bad parameters, 2 an acceptance gate failed,
3 a resource limit or cap was hit.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

EXIT_OK, EXIT_PARAMS, EXIT_GATE, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("clbench")


class ParamError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMS, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


# rack selection ---------------------------------------------------------------


def _add_rack_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--H", help="odd abelian group, e.g. 3,3; uses the reflections of H x| Z/2")
    g.add_argument("--rack", help="name of a built-in rack (see 'clbench rack --list')")
    g.add_argument("--rack-file", type=Path, help="plain-text rack table")


def _rack_from_args(args):
    from .racks import FiniteRack, dihedral_rack, loads, standard_racks

    if args.rack:
        corpus = standard_racks()
        if args.rack not in corpus:
            raise ParamError(f"unknown rack {args.rack!r}; known: {', '.join(corpus)}")
        return args.rack, corpus[args.rack]
    if args.rack_file:
        obj = loads(args.rack_file.read_text())
        if not isinstance(obj, FiniteRack):
            raise ParamError("the table file holds a group, not a rack")
        return str(args.rack_file), obj
    H = args.H or "3"
    return f"dihedral_{H.replace(',', 'x')}", dihedral_rack(H)


def _group_element(rack, label: str) -> int:
    G = rack.group
    if G is None:
        raise ParamError("this rack has no ambient group")
    if label in ("id", "1", "e"):
        return G.identity
    if label in G.labels:
        return G.labels.index(label)
    raise ParamError(f"unknown group element {label!r}; labels: {', '.join(G.labels)}")


def _store(args):
    from .store import Store

    return Store(args.store) if getattr(args, "store", None) else None


def _record(args, kind, params, outputs, seed=0, shard=None):
    from .store import RunRecord, STORE_ENV
    import os

    st = _store(args)
    if st is None and os.environ.get(STORE_ENV):
        from .store import Store

        st = Store()
    if st is not None:
        st.append(RunRecord(kind, params, outputs, seed=seed, shard=shard))


# moments ----------------------------------------------------------------------


def _moment_outputs(rep) -> dict:
    d = rep.to_dict()
    return {
        "count": rep.count,
        "sum_surj": str(rep.sum_surj),
        "empirical_num": d["empirical_num"],
        "empirical_den": d["empirical_den"],
        "predicted_num": d["predicted_num"],
        "predicted_den": d["predicted_den"],
        "mode": "rigorous" if rep.threshold_status == "above threshold" else "empirical",
        "report": d,
    }


def _run_shard(q, n, H, seed, shards, idx, slow):
    from .ffield import squarefree_count
    from .moments import shard_range, sweep, sweep_slow

    rng = shard_range(squarefree_count(q, n), shards, idx)
    fn = sweep_slow if slow else sweep
    return idx, fn(q, n, H, shard=rng, seed=seed)


def cmd_moments(args) -> int:
    from .clgroup import FiniteAbelianGroup, predicted_moment
    from .moments import MomentReport, compare, field_for, merge
    from .store import RunRecord, Store, completed_shards, moments_params, moments_records

    try:
        field_for(args.q)
        H = FiniteAbelianGroup.parse(args.H)
        predicted_moment(H, args.q, args.n % 2)
    except ValueError as exc:
        raise ParamError(str(exc)) from exc
    if args.n < 2:
        raise ParamError("--n must be at least 2")
    if args.shards < 1 or (args.shard is not None and not 0 <= args.shard < args.shards):
        raise ParamError("need 0 <= --shard < --shards")
    Hs = str(H)
    store = Store(args.store) if args.store else Store()
    todo = [args.shard] if args.shard is not None else list(range(args.shards))
    done = completed_shards(store, args.q, args.n, Hs, args.seed, args.shards)
    skipped = [i for i in todo if i in done]
    todo = [i for i in todo if i not in done]
    if skipped:
        print(f"skipping {len(skipped)} shard(s) already in {store.path}")

    def land(idx, rep):
        params = moments_params(args.q, args.n, Hs, args.seed, args.shards, idx)
        store.append(RunRecord("moments", params, _moment_outputs(rep), seed=args.seed, shard=[idx, args.shards]))
        print(f"shard {idx}/{args.shards}: {rep.count} curves, sum |Surj| = {rep.sum_surj} [{rep.wall_time:.1f}s]", flush=True)

    if args.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            futs = [ex.submit(_run_shard, args.q, args.n, Hs, args.seed, args.shards, i, args.slow) for i in todo]
            for fut in as_completed(futs):
                land(*fut.result())
    else:
        for i in todo:
            land(*_run_shard(args.q, args.n, Hs, args.seed, args.shards, i, args.slow))
            if args.pause:
                time.sleep(args.pause)

    recs = moments_records(store, args.q, args.n, Hs, args.seed, args.shards)
    if len(recs) == args.shards:
        rep = merge(MomentReport.from_dict(r.outputs["report"]) for r in recs)
        v = compare(rep)
        print(f"q={rep.q} n={rep.n} H={Hs}: {rep.count} curves")
        print(f"  empirical = {v.empirical} ~ {float(v.empirical):.6f}")
        print(f"  predicted = {v.predicted} ({rep.threshold_status}, {v.mode} comparison)")
        print(f"  |difference| = {float(v.abs_error):.6f}")
    else:
        print(f"{len(recs)}/{args.shards} shards in {store.path}")
    return EXIT_OK


# components -------------------------------------------------------------------


def cmd_components(args) -> int:
    from .hurwitz import braid_orbits, stable_component_count

    name, rack = _rack_from_args(args)
    g = _group_element(rack, args.boundary)
    if args.n_min < 0 or args.n_max < args.n_min:
        raise ParamError("need 0 <= --n-min <= --n-max")
    ns = range(args.n_min, args.n_max + 1, args.step)
    res = stable_component_count(rack, g, ns, budget=args.budget)
    for n in ns:
        if n in res.skipped:
            print(f"n={n}: no tuple has boundary {args.boundary}")
        else:
            print(f"n={n}: {res.counts[n]} component(s)")
    print(res.verdict)
    if args.csv:
        parts = []
        for n in ns:
            if n not in res.skipped:
                text = braid_orbits(rack, n, g, generate_full=True, budget=args.budget).to_csv()
                parts.append(text if not parts else text.split("\n", 1)[1])
        Path(args.csv).write_text("".join(parts))
    params = {"rack": name, "boundary": args.boundary, "n_min": args.n_min, "n_max": args.n_max,
              "step": args.step, "generate_full": True}
    _record(args, "components", params, {"counts": {str(k): v for k, v in res.counts.items()}, "verdict": res.verdict})
    return EXIT_OK


# racks and homology -----------------------------------------------------------


def cmd_rack(args) -> int:
    from .racks import SUBRACK_CAP, connected_components, is_nonsplitting, standard_racks, subracks

    if args.list:
        for k, r in standard_racks().items():
            print(f"{k}: {r.size} elements")
        return EXIT_OK
    name, rack = _rack_from_args(args)
    comps = connected_components(rack)
    print(f"{name}: {rack.size} elements, {len(comps)} component(s), quandle: {rack.is_quandle()}")
    if rack.size <= SUBRACK_CAP:
        subs = subracks(rack)
        ns = is_nonsplitting(rack)
        print(f"  {len(subs)} nonempty subracks; non-splitting: {ns}")
    else:
        subs, ns = None, None
        print(f"  subrack enumeration skipped (more than {SUBRACK_CAP} elements)")
    if args.dump:
        sys.stdout.write(rack.dumps())
    outputs = {"size": rack.size, "components": len(comps), "subracks": len(subs) if subs is not None else None,
               "quandle": rack.is_quandle(), "nonsplitting": ns}
    _record(args, "rack", {"rack": name}, outputs)
    return EXIT_OK


def cmd_homology(args) -> int:
    from .rack_homology import betti_rational, build_complex
    from .racks import connected_components, trivial_rack

    name, rack = _rack_from_args(args)
    if args.d < 1:
        raise ParamError("--d must be at least 1")
    b = betti_rational(rack, args.d)
    print(f"{name}: rational Betti numbers b_0..b_{args.d - 1} = {tuple(b)}")
    if len(connected_components(rack)) == 1:
        same = b == betti_rational(trivial_rack(1), args.d)
        print(f"  connected; matches the one-point rack: {same}")
    if args.triplets:
        out = Path(args.triplets)
        out.mkdir(parents=True, exist_ok=True)
        cx = build_complex(rack, args.d)
        for n in range(1, args.d + 1):
            (out / f"d{n}.txt").write_text(cx.triplets(n))
        print(f"  boundary matrices written to {out}")
    _record(args, "homology", {"rack": name, "d": args.d}, {"betti": b})
    return EXIT_OK


# bounds -----------------------------------------------------------------------


def cmd_bounds(args) -> int:
    from fractions import Fraction

    from .bounds import ErrorBoundParams, VacuousBound, point_count_error, threshold_report

    try:
        rep = threshold_report(args.c_size, args.N0, args.degU)
    except ValueError as exc:
        raise ParamError(str(exc)) from exc
    print(f"q threshold {rep.formula()} = {rep.value}")
    print(f"  ~ {rep.scientific()} ({len(str(rep.value))} digits)")
    outputs = {"threshold": str(rep.value)}
    if args.C is not None:
        need = [args.C_prime, args.I, args.J, args.q, args.n]
        if any(x is None for x in need):
            raise ParamError("--C needs --C-prime, --I, --J, --q and --n")
        try:
            p = ErrorBoundParams(Fraction(args.C), Fraction(args.C_prime), Fraction(args.I), Fraction(args.J), args.q, args.n)
            b = point_count_error(p, with_q_factor=True)
            print(f"moment error bound at q={args.q}, n={args.n}: {b} ~ {float(b):.6g}")
            outputs["error_bound"] = str(b)
        except VacuousBound as exc:
            print(f"moment error bound is vacuous: {exc}")
    _record(args, "bounds", {"c_size": args.c_size, "N0": args.N0, "degU": args.degU}, outputs)
    return EXIT_OK


# jacobian ---------------------------------------------------------------------


def cmd_jacobian(args) -> int:
    from .clgroup import class_group_odd
    from .ffield import factor_int
    from .hyperell import HyperellipticCurve, l_polynomial
    from .jacobian import Jacobian, brute_force_group
    from .moments import field_for

    try:
        spec = field_for(args.q)
        coeffs = list(reversed(args.f))  # given highest degree first
        curve = HyperellipticCurve.from_coeffs(spec, coeffs)
    except ValueError as exc:
        raise ParamError(str(exc)) from exc
    J = Jacobian(curve)
    L = l_polynomial(curve)
    J.set_order(L.at_one())
    odd = [ell for ell in factor_int(J.order) if ell % 2]
    A = class_group_odd(J, odd, seed=args.seed)
    print(f"y^2 = f over F_{args.q}: genus {J.g}, {J.model} model")
    print(f"  L(T) coefficients: {list(L.coeffs)}")
    print(f"  |J(F_q)| = L(1) = {J.order}")
    print(f"  odd part of the class group: {A if A.factors else 'trivial'}")
    outputs = {"genus": J.g, "order": J.order, "structure": str(A), "L": list(L.coeffs)}
    if args.oracle:
        G = brute_force_group(J, cap=args.cap)
        same = len(G) == J.order
        print(f"  brute force: {len(G)} classes; agrees with L(1): {same}")
        outputs["oracle_order"] = len(G)
        if not same:
            return EXIT_GATE
    _record(args, "jacobian-oracle", {"q": args.q, "f": ",".join(map(str, args.f))}, outputs, seed=args.seed)
    return EXIT_OK


# verify and export ------------------------------------------------------------


def cmd_verify(args) -> int:
    from .acceptance import GATES, run_gate

    chosen = args.gates or sorted(GATES)
    chosen = [g for g in chosen if g not in (args.skip or [])]
    bad = [g for g in chosen if g not in GATES]
    if bad:
        raise ParamError(f"unknown gate(s) {bad}")
    failed = 0
    for g in chosen:
        kw = {"strict": True} if g == 4 and args.strict else {}
        res = run_gate(g, **kw)
        print(res.line(), flush=True)
        for w in res.warnings:
            print(f"      warning: {w}")
        failed += not res.passed
    print(f"{len(chosen) - failed}/{len(chosen)} gates passed")
    return EXIT_GATE if failed else EXIT_OK


def cmd_export(args) -> int:
    from .store import Store, StoreError, export_csv

    try:
        rows = export_csv(Store(args.store) if args.store else Store(), args.kind, args.out)
    except StoreError as exc:
        raise ParamError(str(exc)) from exc
    print(f"{rows} row(s) written to {args.out}")
    return EXIT_OK


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .hurwitz import DEFAULT_BUDGET

    p = _Parser(prog="clbench", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("moments", help="exhaustive H-moment sweep over monic squarefree f")
    m.add_argument("--q", type=int, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--H", default="3")
    m.add_argument("--shards", type=int, default=1)
    m.add_argument("--shard", type=int, help="run only this shard index")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--store", help="results file (default: $CLBENCH_STORE or ./clbench_results.ndjson)")
    m.add_argument("--jobs", type=int, default=1, help="worker processes")
    m.add_argument("--pause", type=float, default=0.0, help="sleep between shards (interruption testing)")
    m.add_argument("--slow", action="store_true", help="use the brute-force group oracle per curve")
    m.set_defaults(func=cmd_moments)

    c = sub.add_parser("components", help="braid orbits with fixed boundary that generate G")
    _add_rack_args(c)
    c.add_argument("--boundary", default="id", help="group element label, or id")
    c.add_argument("--n-min", type=int, default=2)
    c.add_argument("--n-max", type=int, default=8)
    c.add_argument("--step", type=int, default=1)
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="memory budget in bytes")
    c.add_argument("--csv", help="write the component tables here")
    c.add_argument("--store")
    c.set_defaults(func=cmd_components)

    r = sub.add_parser("rack", help="summary of a rack")
    _add_rack_args(r)
    r.add_argument("--list", action="store_true", help="list the built-in racks")
    r.add_argument("--dump", action="store_true", help="print the operation table")
    r.add_argument("--store")
    r.set_defaults(func=cmd_rack)

    h = sub.add_parser("homology", help="rational rack homology in low degrees")
    _add_rack_args(h)
    h.add_argument("--d", type=int, default=3)
    h.add_argument("--triplets", help="directory for sparse boundary matrices")
    h.add_argument("--store")
    h.set_defaults(func=cmd_homology)

    b = sub.add_parser("bounds", help="explicit threshold and error bound")
    b.add_argument("--c-size", type=int, required=True)
    b.add_argument("--N0", type=int, required=True)
    b.add_argument("--degU", type=int, required=True)
    b.add_argument("--C")
    b.add_argument("--C-prime", dest="C_prime")
    b.add_argument("--I")
    b.add_argument("--J")
    b.add_argument("--q", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--store")
    b.set_defaults(func=cmd_bounds)

    j = sub.add_parser("jacobian", help="L-polynomial and class group of one curve")
    j.add_argument("--q", type=int, required=True)
    j.add_argument("--f", type=_int_list, required=True, help="coefficients of f, highest degree first")
    j.add_argument("--seed", type=int, default=0)
    j.add_argument("--oracle", action="store_true", help="cross-check against brute-force enumeration")
    j.add_argument("--cap", type=int, default=20000)
    j.add_argument("--store")
    j.set_defaults(func=cmd_jacobian)

    v = sub.add_parser("verify", help="run the acceptance gates")
    v.add_argument("--gates", type=_int_list, help="comma-separated gate numbers (default: all)")
    v.add_argument("--skip", type=_int_list)
    v.add_argument("--strict", action="store_true", help="soft moment gates fail instead of warning")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="CSV export of stored records")
    e.add_argument("--kind", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--store")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    from .clgroup import GroupError
    from .hurwitz import BudgetExceeded, CannotCertify
    from .jacobian import JacobianError, SylowBudgetExceeded
    from .racks import RackError

    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (BudgetExceeded, CannotCertify, SylowBudgetExceeded, MemoryError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except RackError as exc:
        code = EXIT_RESOURCE if "capped" in str(exc) or "budget" in str(exc) else EXIT_PARAMS
        print(f"error: {exc}", file=sys.stderr)
        return code
    except JacobianError as exc:
        code = EXIT_RESOURCE if "cap" in str(exc) else EXIT_PARAMS
        print(f"error: {exc}", file=sys.stderr)
        return code
    except (ParamError, GroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
