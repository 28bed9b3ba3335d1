"""Run every registered scenario and write one JSON report per scenario."""
import argparse
import pathlib
import sys

from zbaire.bench import REGISTRY, Window, run_scenario


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="reports")
    ap.add_argument("--window", type=Window.parse, default=Window(2, 6, 2, 0))
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    out = pathlib.Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in sorted(REGISTRY):
        params = {"suite": True} if name == "silver-sum-translate" else {}
        w = Window(a.window.B, 8, 3, a.window.N) if name == "silver-sum-translate" else a.window
        rep = run_scenario(name, w, params, a.seed)
        (out / f"{name}.json").write_text(rep.dumps(timing=True) + "\n")
        print(f"{'ok  ' if rep.ok else 'FAIL'} {name:24s} {len(rep.checks):3d} checks {rep.runtime:7.2f}s")
        failed += not rep.ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
