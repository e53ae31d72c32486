#!/usr/bin/env python3
"""Generate a CSV dataset from a Gaussian model with one controlled
partial correlation, for trying out the CLI:

    python scripts/make_dataset.py --dim 4 --n 60 --rho 0.6 --out demo.csv
    concgraph select --input demo.csv --alpha 0.05
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from concgraph import PrecisionSpec, sample_gaussian  # noqa: E402


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=4)
    parser.add_argument("--n", type=int, default=60)
    parser.add_argument(
        "--rho", type=float, default=0.6,
        help="true partial correlation on edge (0, 1)",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="CSV path (default stdout)")
    args = parser.parse_args(argv)

    if args.rho == 0.0:
        spec = PrecisionSpec.identity(args.dim)
    else:
        spec = PrecisionSpec.single_edge(args.dim, 0, 1, args.rho)
    data = sample_gaussian(spec, args.n, seed=args.seed)
    lines = [",".join(data.names)]
    lines.extend(",".join(repr(v) for v in row) for row in data.values.tolist())
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
