"""Command line driver: ``hybridsum <command> CONFIG [options]``.

Exit codes: 0 success, 1 failed verification or unexpected error,
2 invalid input, 3 a theorem hypothesis fails (override with --force).
"""
from __future__ import annotations

import argparse
import hashlib
import logging
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .algebra import Verdict, check_hypotheses
from .bounds import BOUND_CSV_HEADER, SweepItem, bound_ratio_sweep
from .config import build_experiment, config_hash, load_run_config
from .errors import HybridSumError
from .geometry import count_matching_tuples, enumerate_points
from .io import OutputSet, ResultCache, canonical_json, fmt_float, series_from_blob, \
    series_to_blob
from .stats import DistributionReport, select_model
from .sums import compute_series, moments

log = logging.getLogger("hybridsum")

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_HYPOTHESIS = 0, 1, 2, 3


class HypothesisFailure(Exception):
    pass


def _versions():
    return {"python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "hybridsum": __version__}


def _csv(rows, header) -> str:
    def cell(v):
        return fmt_float(v) if isinstance(v, float) else str(v)
    return "\n".join([",".join(header)] + [",".join(cell(v) for v in r) for r in rows]) + "\n"


class Run:
    """Shared state of one subcommand invocation."""

    def __init__(self, args):
        self.args = args
        self.rc = load_run_config(args.config)
        self.cfg = build_experiment(self.rc)
        self.hash = config_hash(self.rc)
        self.out = OutputSet(args.out or self.rc.out_dir)
        self._pt = None

    @property
    def pt(self):
        if self._pt is None:
            self._pt = enumerate_points(self.cfg.P, self.cfg.rect)
        return self._pt

    def hypotheses(self):
        rep = check_hypotheses(self.cfg.f, self.cfg.g, self.cfg.P, self.rc.chi_order,
                               self.rc.resolved_mode, duplicate_x=self.pt.duplicate_x)
        if rep.overall is Verdict.FAIL:
            failed = [k for k, v in rep.hypotheses.items() if v is Verdict.FAIL]
            if not self.args.force:
                raise HypothesisFailure(f"hypothesis check failed: {', '.join(failed)} "
                                        "(rerun with --force to compute anyway)")
            log.warning("hypotheses failed (%s); continuing because of --force",
                        ", ".join(failed))
        return rep

    def series(self):
        cache = None if self.args.no_cache else ResultCache(
            self.args.cache_dir or Path(self.out.out_dir) / "cache")
        key = hashlib.sha256(f"{self.hash}:{self.args.method}".encode()).hexdigest()
        if cache is not None:
            blob = cache.get(key)
            if blob is not None:
                log.info("series cache hit %s", key[:12])
                return series_from_blob(blob)
        s = compute_series(self.cfg, self.pt, self.args.method)
        if cache is not None:
            cache.put(key, series_to_blob(s))
        return s

    def manifest(self, command, t0):
        files = {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in self.out.written}
        self.out.write(f"manifest_{command}.json", canonical_json({
            "command": command, "config_hash": self.hash, "config": self.rc.to_dict(),
            "versions": _versions(), "wall_time_s": time.perf_counter() - t0, "files": files,
        }))


def cmd_points(run: Run):
    run.out.write("points.csv", run.pt.to_csv())
    print(f"{run.pt.r} points written to {run.out.out_dir / 'points.csv'}")


def cmd_sums(run: Run):
    run.hypotheses()
    s = run.series()
    run.out.write("series.csv", s.to_csv(fmt_float))
    print(f"{s.size_I} window sums written to {run.out.out_dir / 'series.csv'}")


def cmd_moments(run: Run):
    hyp = run.hypotheses()
    s = run.series()
    rep = moments(s, run.rc.k_max, run.cfg.standard_model)
    run.out.write("moments.json", canonical_json({
        "size_I": rep.size_I, "normalization": "M_k/|I|" if rep.standard else "2^(k/2) M_k/|I|",
        "scale": s.scale, "hypotheses": hyp.to_dict(), "moments": rep.to_list(),
    }))
    for row in rep.rows[1:]:
        print(f"k={row.k:2d}  normalized={row.normalized: .6f}  mu_k={row.mu_k}")


def cmd_distribution(run: Run):
    run.hypotheses()
    s = run.series()
    model = select_model(run.rc.chi_order, run.rc.psi_k % run.rc.p, run.rc.theta)
    d = DistributionReport(s.u)
    body = d.to_dict(model)
    run.out.write("distribution.json", canonical_json(body))
    run.out.write("histogram.csv", _csv([(h["count"], h["left"], h["width"])
                                         for h in body["histogram"]], ["count", "left", "width"]))
    print(f"ks({model.value}) = {d.ks(model):.6f} over {d.n} windows")


def cmd_bounds(run: Run):
    rc, cfg = run.rc, run.cfg
    item = SweepItem(cfg.P, cfg.g, cfg.f, cfg.chi, cfg.psi, (rc.I[0], rc.I[1] + 1),
                     (rc.J[0], rc.J[1]), "config")
    reports = bound_ratio_sweep([item], run.args.c_slack)
    run.out.write("bounds.csv", _csv([r.row() for r in reports], BOUND_CSV_HEADER))
    for r in reports:
        print(f"|S|={r.abs_S:.4f}  B={r.bound:.4f}  ratio={r.ratio:.6f}  "
              f"degenerate={r.degenerate.value}")


def cmd_tuples(args) -> int:
    H = args.H
    if args.config:
        rc = load_run_config(args.config)
        H = H or rc.H
    if not H:
        raise HybridSumError("tuples needs --H or a config")
    n = count_matching_tuples(H, args.j)
    print(n)
    if args.config:
        out = OutputSet(args.out or rc.out_dir)
        out.write("tuples.json", canonical_json({"H": H, "j": args.j, "count": n}))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .checks import run_checks
    results = run_checks(args.filter, args.inject_fault or ())
    if not results:
        print(f"no checks match {args.filter!r}")
        return EXIT_FAIL
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.seconds:6.2f}s  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


COMMANDS = {"points": cmd_points, "sums": cmd_sums, "moments": cmd_moments,
            "distribution": cmd_distribution, "bounds": cmd_bounds}


def build_parser() -> argparse.ArgumentParser:
    from .checks import FAULTS
    ap = argparse.ArgumentParser(prog="hybridsum", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("config", help="JSON run config")
        sp.add_argument("--out", help="output directory (overrides out_dir)")
        sp.add_argument("--force", action="store_true", help="ignore failed hypothesis checks")
        sp.add_argument("--method", choices=("incremental", "direct"), default="incremental")
        sp.add_argument("--no-cache", action="store_true")
        sp.add_argument("--cache-dir")
        if name == "bounds":
            sp.add_argument("--c-slack", type=float, default=3.0)
    sp = sub.add_parser("tuples")
    sp.add_argument("config", nargs="?")
    sp.add_argument("--H", type=int)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--out")
    sp = sub.add_parser("verify")
    sp.add_argument("--filter", help="run only checks whose name contains this")
    sp.add_argument("--inject-fault", action="append", choices=FAULTS)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "verify":
        return cmd_verify(args)
    run = None
    try:
        if args.command == "tuples":
            return cmd_tuples(args)
        t0 = time.perf_counter()
        run = Run(args)
        COMMANDS[args.command](run)
        run.manifest(args.command, t0)
        return EXIT_OK
    except (HybridSumError, ValueError) as exc:
        code, msg = EXIT_INVALID, str(exc)
    except HypothesisFailure as exc:
        code, msg = EXIT_HYPOTHESIS, str(exc)
    except OSError as exc:
        code, msg = EXIT_FAIL, f"{type(exc).__name__}: {exc}"
    except BaseException:
        if run is not None:
            run.out.rollback()
        raise
    if run is not None:
        run.out.rollback()
    print(f"error: {msg}", file=sys.stderr)
    return code

if __name__ == "__main__":
    sys.exit(main())
