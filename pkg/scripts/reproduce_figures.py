"""Render the six shipped figure scenarios and print their metrics."""
import argparse
import json
import pathlib
import time

from ppcat.scenario import Scenario, load_config, run_scenario

ROOT = pathlib.Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "out" / "figures"))
    ap.add_argument("--only", nargs="*", help="scenario names, e.g. fig1a fig3b")
    args = ap.parse_args()
    paths = sorted((ROOT / "scenarios").glob("*.toml"))
    if args.only:
        paths = [p for p in paths if p.stem in args.only]
    summary = {}
    for path in paths:
        t0 = time.perf_counter()
        rec = run_scenario(Scenario.from_mapping(load_config(path)), args.out)
        summary[path.stem] = {
            mode: {k: m[k] for k in ("negativity_volume", "fringe_visibility", "normalization_defect", "min", "max")}
            for mode, m in rec["fields"].items()
        }
        summary[path.stem]["seconds"] = round(time.perf_counter() - t0, 3)
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
