"""Ratios |S| / B over the curated sweep, optionally extended to larger primes."""
import argparse

from hybridsum.acceptance import curated_sweep, degenerate_item
from hybridsum.bounds import BOUND_CSV_HEADER, bound_ratio_sweep, max_ratio
from hybridsum.io import atomic_write, fmt_float


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c-slack", type=float, default=3.0)
    ap.add_argument("--out", default="bounds_sweep.csv")
    args = ap.parse_args(argv)

    items = curated_sweep() + [degenerate_item(p) for p in (101, 199)]
    reports = bound_ratio_sweep(items, args.c_slack)
    lines = [",".join(BOUND_CSV_HEADER + ["label"])]
    for r in reports:
        cells = [fmt_float(v) if isinstance(v, float) else str(v) for v in r.row()]
        lines.append(",".join(cells + [f'"{r.label}"']))
        print(f"{r.label:<40} p={r.p:<4} |S|={r.abs_S:9.3f}  ratio={r.ratio:.5f}  "
              f"degenerate={r.degenerate.value}")
    atomic_write(args.out, "\n".join(lines) + "\n")
    print(f"max ratio (non-degenerate): {max_ratio(reports):.6f}  -> {args.out}")


if __name__ == "__main__":
    main()
