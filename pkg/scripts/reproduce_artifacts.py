"""Write every CLI table (CSV and JSON) for the default GaAs setting into a directory."""

import argparse
import sys
from pathlib import Path

from qdbus.cli import main as qdbus

RUNS = {
    "pst_check": ["pst-check", "--n", "2..32"],
    "separation_v10": ["separation", "--u", "20", "--v", "10", "--eps2", "10"],
    "separation_v0": ["separation", "--u", "20", "--v", "0", "--eps2", "20"],
    "separation_unbiased": ["separation", "--u", "20", "--v", "10", "--eps2", "0"],
    "freeze_2e": ["freeze-curve", "--encoding", "2e"],
    "freeze_1e_physical": ["freeze-curve", "--encoding", "1e", "--convention", "physical"],
    "energy_event": ["energy-compare", "--n-max", "100"],
    "energy_literal": ["energy-compare", "--n-max", "100", "--pst-model", "literal"],
}
PROTOCOL_RUNS = {
    "protocol_n16": ["protocol", "--n", "16"],
    "protocol_n16_1e": ["protocol", "--n", "16", "--encoding", "1e"],
    "protocol_n160_seg16": ["protocol", "--n", "160", "--segments", "16"],
}


def run(argv):
    code = qdbus(argv)
    if code != 0:
        sys.exit(f"qdbus {' '.join(argv)} exited with {code}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", type=Path)
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    for name, argv in RUNS.items():
        extra = []
        if argv[0] == "separation":
            extra = ["--summary", str(args.outdir / f"{name}_summary.json")]
        run(argv + extra + ["--out", str(args.outdir / f"{name}.csv")])
        if argv[0] != "separation":
            run(argv + ["--format", "json", "--out", str(args.outdir / f"{name}.json")])
    for name, argv in PROTOCOL_RUNS.items():
        run(argv + ["--out", str(args.outdir / f"{name}.json")])
    print(f"wrote {len(list(args.outdir.iterdir()))} files to {args.outdir}")


if __name__ == "__main__":
    main()
