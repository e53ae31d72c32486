#!/usr/bin/env python3
"""Monte Carlo experiment battery: size, power curve and the accuracy of
the asymptotic Fisher test across degrees of freedom.

Writes a single JSON artifact (stdout by default).  Deterministic for a
fixed --seed.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from concgraph import PrecisionSpec, estimate_power, estimate_size  # noqa: E402
from concgraph.cli import json_dumps  # noqa: E402


def size_block(dim, n, alpha, reps, seed):
    out = estimate_size(
        PrecisionSpec.identity(dim),
        n=n,
        alpha=alpha,
        method=("umpu", "partial_corr", "fisher"),
        reps=reps,
        seed=seed,
    )
    return {
        "dim": dim,
        "n": n,
        "alpha": alpha,
        "replications": reps,
        "seed": seed,
        "rates": {name: o.rate for name, o in out.per_method.items()},
        "std_errors": {name: o.std_error for name, o in out.per_method.items()},
        "fisher_vs_exact_agreement": out.agreement["partial_corr~fisher"],
        "ks_statistic": out.ks_statistic,
    }


def power_block(dim, n, alpha, rho, reps, seed):
    out = estimate_power(
        PrecisionSpec.single_edge(dim, 0, 1, rho),
        n=n,
        alpha=alpha,
        method="partial_corr",
        reps=reps,
        seed=seed,
    )
    return {
        "rho": rho,
        "power": out.rejection_rate,
        "std_error": out.std_error,
        "matched_null_size": out.null_rate,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=10000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--out", default=None)
    args = parser.parse_args(argv)

    sizes = [
        size_block(5, 25, args.alpha, args.reps, args.seed),
        size_block(3, 10, args.alpha, args.reps, args.seed + 1),
        # small and large degrees of freedom for the Fisher comparison
        size_block(5, 10, args.alpha, args.reps, args.seed + 2),
        size_block(2, 52, args.alpha, args.reps, args.seed + 3),
    ]
    powers = {
        "dim": 5,
        "n": 50,
        "alpha": args.alpha,
        "replications": args.reps,
        "curve": [
            power_block(5, 50, args.alpha, rho, args.reps, args.seed + 10 + k)
            for k, rho in enumerate((0.1, 0.2, 0.3, 0.5))
        ],
    }
    doc = {"size": sizes, "power": powers}
    text = json_dumps(doc)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
