"""Command line front end: ``python3 -m zbaire <command> ...``.

Exit codes: 0 all checks pass, 1 a check failed (see the report), 2 usage or
window error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bench, escape, ideals, shrink, trees
from .bench import Window, WindowError
from .ideals import CertError, CoverFamily, IntervalCert, MeagerWitness, Slalom
from .sequences import FreeSet, Periodic, SequenceError
from .trees import SilverSpec, TreeError


class UsageError(Exception):
    pass


def _load(path: str | None):
    if path is None:
        return None
    with open(path) as fh:
        return json.load(fh)


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _all_true(ledger) -> bool:
    if isinstance(ledger, dict):
        return all(_all_true(v) for k, v in ledger.items() if k not in ("failures", "threshold", "blocks", "horizon"))
    if isinstance(ledger, list):
        return True
    return bool(ledger)


def _witness(doc) -> MeagerWitness:
    if doc is None:
        return ideals.const_witness((0,))
    cert = ideals.cert_from_json(doc)
    if isinstance(cert, IntervalCert):
        return ideals.witness_from_interval(cert)
    if not isinstance(cert, MeagerWitness):
        raise UsageError("expected a meager witness or interval certificate")
    return cert


def cmd_shrink(a) -> int:
    w = a.window
    doc = _load(a.cert)
    kind = a.kind
    if kind == "sacks":
        f = _witness(doc)
        res = shrink.sacks_shrink_meager(trees.make_full(), f, a.steps, 400)
        out = res.to_json()
        ok1, _ = bench.sacks_iv_exact(res, f)
        ok2, _ = bench.sacks_grid_oracle(res, res.witness)
        out["oracles"] = {"iv_exact": ok1, "grid": ok2}
        ok = ok1 and ok2 and _all_true({k: v for k, v in res.ledger.items() if k != "failures"})
    elif kind == "fusion":
        fr = shrink.sacks_fusion(trees.make_full(), _witness(doc), a.steps, 400)
        chain = bench.fusion_chain(fr)
        out = {"stages": a.steps, "leq_n": {str(n): v for n, v in chain},
               "witnesses": [r.to_json()["h_table"] for r in fr.shrinks]}
        ok = all(v for _, v in chain)
    elif kind in ("mminus-perfect", "mminus-silver"):
        c = IntervalCert.from_json(doc) if doc else IntervalCert(Periodic((), (1,)), bench.Cuts.uniform(1), "cofinite", 0)
        if kind == "mminus-perfect":
            res = shrink.mminus_shrink_perfect(trees.make_full(), c, a.n_fold, w.d * 2)
        else:
            res = shrink.mminus_shrink_silver(SilverSpec(FreeSet.progression(0, 1)), c, a.n_fold, w.d * 2)
        out = res.to_json()
        ok = _all_true(res.ledger)
    elif kind == "fakenull":
        s = Slalom.from_json(doc) if doc else ideals.make_slalom({1: [(0,)]}, w.d)
        budget = Fraction(a.budget) if a.budget else None
        res = shrink.fakenull_shrink_perfect(trees.make_full(), s, 400, budget)
        out = res.to_json()
        out["new_slalom"] = res.slalom.to_json()
        ok = _all_true(res.ledger)
    elif kind == "miller-null":
        res = shrink.miller_null_subtree(trees.make_full(), a.steps)
        out = res.to_json()
        ok = _all_true(res.ledger)
    else:
        raise UsageError(f"unknown shrink kind {kind}")
    out["pass"] = ok
    _emit(out, a.out)
    return 0 if ok else 1


def cmd_escape(a) -> int:
    doc = _load(a.cert)
    kind = a.kind
    if kind == "miller-meager":
        tr = escape.miller_meager_escape(escape.make_alpha_tree(), _witness(doc), a.steps)
    elif kind == "silver-nwd":
        tr = escape.silver_nwd_escape(SilverSpec(FreeSet.progression(0, 2)), _witness(doc), a.steps)
    elif kind == "miller-pair":
        s = Slalom.from_json(doc) if doc else shrink.miller_null_subtree(trees.make_full(), 5).slalom
        tr = escape.miller_pair_escape(trees.make_full(), trees.make_miller(lambda n: len(n) % 2 == 0), s, a.steps)
        ok, _ = bench.pair_scan(tr, s)
        tr.checked_conditions["full_scan"] = ok
    elif kind == "m-not-mminus":
        tr = escape.m_not_mminus_branch(None, Periodic((), (1,)), bench.Cuts.uniform(2), a.steps)
    elif kind == "laver":
        import random
        rng = random.Random(a.seed)
        z = tuple(rng.randint(-5, 5) for _ in range(a.window.d))
        tr = escape.laver_sum_decompose(trees.make_laver(()), z)
    else:
        raise UsageError(f"unknown escape kind {kind}")
    out = tr.to_json()
    out["pass"] = tr.ok
    _emit(out, a.out)
    return 0 if tr.ok else 1


def cmd_convert(a) -> int:
    doc = _load(a.cert)
    if doc is None:
        raise UsageError("convert needs --cert")
    d = a.window.d
    if isinstance(doc, list) or doc.get("kind") == "cover-list":
        fams = [CoverFamily.from_json(x) for x in (doc if isinstance(doc, list) else doc["families"])]
        s, ledger = ideals.cover_to_slalom(fams, d)
        out = {"slalom": s.to_json(), "ledger": ledger}
    elif doc.get("kind") == "slalom":
        s = Slalom.from_json(doc)
        out = {"kind": "cover-list",
               "families": [ideals.slalom_to_cover(s, n, d).to_json() for n in range(d)]}
    else:
        raise UsageError("convert expects a slalom or a list of cover families")
    _emit(out, a.out)
    return 0


def cmd_verify(a) -> int:
    if a.report:
        old = _load(a.report)
        inp = old.get("inputs")
        if not inp:
            raise UsageError("report carries no replayable inputs")
        rep = bench.run_scenario(inp["scenario"], Window(**inp["window"]), inp["params"], inp["seed"])
        same = json.loads(rep.dumps()) == {k: v for k, v in old.items() if k != "runtime"}
        _emit({"replayed": inp["scenario"], "identical": same, "pass": rep.ok}, a.out)
        return 0 if same and rep.ok else 1
    doc = _load(a.cert)
    if doc is None or a.x is None:
        raise UsageError("verify needs --report, or --cert with --x")
    cert = ideals.cert_from_json(doc)
    x = tuple(int(v) for v in a.x.split(",")) if a.x else ()
    if isinstance(cert, CoverFamily):
        res = {"covers": cert.covers(x)}
    else:
        inside, why = bench.in_ideal_set(cert, x, a.window.N)
        res = {"in_set": inside, "witness": bench._jsonable(why)}
    _emit(res, a.out)
    return 0


def cmd_scenario(a) -> int:
    if a.name == "list":
        print("\n".join(sorted(bench.REGISTRY)))
        return 0
    params = {}
    for kv in a.param or []:
        k, _, v = kv.partition("=")
        try:
            params[k] = json.loads(v)
        except json.JSONDecodeError:
            params[k] = v
    if a.steps is not None:
        params["steps"] = a.steps
    if a.n_fold is not None:
        params["n_fold"] = a.n_fold
    rep = bench.run_scenario(a.name, a.window, params, a.seed)
    text = rep.dumps(timing=a.timing)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for c in rep.failures():
        print(f"FAIL {c.name}: {json.dumps(bench._jsonable(c.counterexample))}", file=sys.stderr)
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zbaire", description="Tree and ideal constructions on Z^omega at window scale.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=Window.parse, default=Window(), help="B,d,budget,N")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")
    common.add_argument("--cert", help="input certificate JSON")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("shrink", parents=[common])
    s.add_argument("kind", choices=["sacks", "fusion", "mminus-perfect", "mminus-silver", "fakenull", "miller-null"])
    s.add_argument("--steps", type=int, default=3)
    s.add_argument("--n-fold", type=int, default=2)
    s.add_argument("--budget", help="fake-null weighted budget (a fraction)")
    s.set_defaults(fn=cmd_shrink)

    s = sub.add_parser("escape", parents=[common])
    s.add_argument("kind", choices=["miller-meager", "silver-nwd", "miller-pair", "m-not-mminus", "laver"])
    s.add_argument("--steps", type=int, default=6)
    s.set_defaults(fn=cmd_escape)

    s = sub.add_parser("convert", parents=[common])
    s.set_defaults(fn=cmd_convert)

    s = sub.add_parser("verify", parents=[common])
    s.add_argument("--x", help="comma-separated word to test against --cert")
    s.add_argument("--report", help="scenario report to replay")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("scenario", parents=[common])
    s.add_argument("name", help="scenario name, or 'list'")
    s.add_argument("--steps", type=int)
    s.add_argument("--n-fold", type=int)
    s.add_argument("--param", action="append", help="key=json-value")
    s.add_argument("--timing", action="store_true")
    s.set_defaults(fn=cmd_scenario)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return a.fn(a)
    except (UsageError, WindowError, KeyError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (CertError, TreeError, SequenceError, shrink.ShrinkError, escape.EscapeError) as e:
        print(f"construction error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
