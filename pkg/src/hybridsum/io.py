"""Deterministic serialization, atomic writes and the content-addressed cache."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np


def fmt_float(v: float) -> str:
    """Shortest repr that round-trips (at most 17 significant digits)."""
    return repr(float(v))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def content_hash(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def atomic_write(path: Path | str, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


class OutputSet:
    """Tracks files written during one command so a failure can roll them back."""

    def __init__(self, out_dir: Path | str):
        self.out_dir = Path(out_dir)
        self.written: list[Path] = []

    def write(self, name: str, text: str) -> Path:
        path = atomic_write(self.out_dir / name, text)
        self.written.append(path)
        return path

    def rollback(self):
        for path in self.written:
            try:
                path.unlink()
            except FileNotFoundError:
                pass
        self.written.clear()


class ResultCache:
    """Directory of JSON blobs named by the hash of the inputs that produced them."""

    def __init__(self, root: Path | str):
        self.root = Path(root)

    def path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, key: str):
        path = self.path(key)
        if not path.exists():
            return None
        with open(path) as fh:
            return json.load(fh)

    def put(self, key: str, obj) -> None:
        atomic_write(self.path(key), canonical_json(obj))


def series_to_blob(series) -> dict:
    return {
        "ns": series.ns.tolist(),
        "re_S": series.S.real.tolist(),
        "im_S": series.S.imag.tolist(),
        "terms": series.terms.tolist(),
        "poles_skipped": series.poles_skipped.tolist(),
        "scale": series.scale,
        "theta": series.theta,
        "meta": series.meta,
    }


def series_from_blob(blob):
    from .sums import SumSeries, projections
    S = np.array(blob["re_S"]) + 1j * np.array(blob["im_S"])
    return SumSeries(
        ns=np.array(blob["ns"], dtype=np.int64),
        S=S,
        u=projections(S, blob["theta"], blob["scale"]),
        terms=np.array(blob["terms"], dtype=np.int64),
        poles_skipped=np.array(blob["poles_skipped"], dtype=np.int64),
        scale=blob["scale"],
        theta=blob["theta"],
        meta=dict(blob["meta"]),
    )
