"""Run the acceptance criteria and save their measured values as JSON."""
import argparse
import json

from hybridsum.acceptance import CRITERIA, run_all


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("ids", nargs="*", metavar="ID",
                    help=f"criterion ids among {', '.join(CRITERIA)} (default: all)")
    ap.add_argument("--json", default="acceptance_report.json")
    args = ap.parse_args(argv)

    results = run_all(args.ids or None)
    for r in results:
        print(r.line())
    body = [{"id": r.cid, "title": r.title, "passed": r.passed, "seconds": r.seconds,
             "measured": r.measured} for r in results]
    with open(args.json, "w") as fh:
        json.dump(body, fh, indent=2, default=str)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria pass -> {args.json}")


if __name__ == "__main__":
    main()
