"""Append-only newline-delimited JSON results store.

Each line is one RunRecord.  Records are keyed by a digest of the canonical
parameters (shard included), so appending a shard twice is a no-op and a
resumed sweep can skip what is already there.  A torn final line left by a
killed writer is dropped on read and cut off before the next append.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

STORE_ENV = "CLBENCH_STORE"
DEFAULT_STORE = "clbench_results.ndjson"
KINDS = ("moments", "components", "rack", "homology", "bounds", "jacobian-oracle")

log = logging.getLogger(__name__)

CSV_HEADERS = {
    "moments": ["q", "n", "H", "count", "sum_surj", "empirical_num", "empirical_den", "predicted_num", "predicted_den", "mode"],
    "components": ["rack", "boundary", "n", "count", "generate_full"],
    "rack": ["rack", "size", "components", "subracks", "quandle", "nonsplitting"],
    "homology": ["rack", "d", "betti"],
    "bounds": ["c_size", "N0", "degU", "threshold"],
    "jacobian-oracle": ["q", "f", "genus", "order", "structure"],
}


class StoreError(RuntimeError):
    pass


def default_store_path() -> Path:
    return Path(os.environ.get(STORE_ENV, DEFAULT_STORE))


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def param_digest(kind: str, params: dict) -> str:
    return hashlib.sha256(canonical({"kind": kind, "params": params}).encode()).hexdigest()


def now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z")


def tool_version() -> str:
    from . import __version__

    return __version__


@dataclass(frozen=True)
class RunRecord:
    kind: str
    params: dict
    outputs: dict
    seed: int = 0
    shard: list | None = None  # [index, count] for sharded runs
    version: str = field(default_factory=tool_version)
    timestamp: str = field(default_factory=now_rfc3339)
    digest: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise StoreError(f"unknown record kind {self.kind!r}")
        if not self.digest:
            object.__setattr__(self, "digest", param_digest(self.kind, self.params))

    def to_line(self) -> str:
        return canonical(asdict(self)) + "\n"

    @classmethod
    def from_json(cls, d: dict) -> RunRecord:
        return cls(**d)


class Store:
    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else default_store_path()

    def _raw(self) -> bytes:
        try:
            return self.path.read_bytes()
        except FileNotFoundError:
            return b""

    def read(self) -> list[RunRecord]:
        data = self._raw()
        if not data:
            return []
        lines = data.split(b"\n")
        tail = lines.pop()  # text after the last newline, empty if the file is whole
        records = []
        for k, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                records.append(RunRecord.from_json(json.loads(line)))
            except (ValueError, TypeError) as exc:
                raise StoreError(f"{self.path}: line {k + 1} is corrupt: {exc}") from exc
        if tail.strip():
            try:
                records.append(RunRecord.from_json(json.loads(tail)))
            except (ValueError, TypeError):
                log.warning("%s: dropping incomplete final line (%d bytes)", self.path, len(tail))
        return records

    def _repair_tail(self) -> None:
        data = self._raw()
        if data and not data.endswith(b"\n"):
            cut = data.rfind(b"\n") + 1
            tail = data[cut:]
            try:
                json.loads(tail)
                fixed = data + b"\n"
            except ValueError:
                log.warning("%s: cutting incomplete final line (%d bytes)", self.path, len(tail))
                fixed = data[:cut]
            with open(self.path, "wb") as fh:
                fh.write(fixed)
                fh.flush()
                os.fsync(fh.fileno())

    def digests(self) -> set[str]:
        return {r.digest for r in self.read()}

    def append(self, record: RunRecord) -> bool:
        """Write the record unless its digest is already present; True if written."""
        self._repair_tail()
        if record.digest in self.digests():
            return False
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="ascii") as fh:
            fh.write(record.to_line())
            fh.flush()
            os.fsync(fh.fileno())
        return True

    def select(self, kind: str) -> list[RunRecord]:
        seen: set[str] = set()
        out = []
        for r in self.read():
            if r.kind == kind and r.digest not in seen:
                seen.add(r.digest)
                out.append(r)
        return out


def moments_params(q: int, n: int, H: str, seed: int, shards: int, index: int) -> dict:
    return {"q": q, "n": n, "H": H, "seed": seed, "shards": shards, "shard": index}


def completed_shards(store: Store, q: int, n: int, H: str, seed: int, shards: int) -> set[int]:
    """Shard indices of this sweep already in the store."""
    have = store.digests()
    return {i for i in range(shards) if param_digest("moments", moments_params(q, n, H, seed, shards, i)) in have}


def moments_records(store: Store, q: int, n: int, H: str, seed: int, shards: int) -> list[RunRecord]:
    want = {param_digest("moments", moments_params(q, n, H, seed, shards, i)) for i in range(shards)}
    return [r for r in store.select("moments") if r.digest in want]


def _csv_row(rec: RunRecord) -> list:
    p, o = rec.params, rec.outputs
    if rec.kind == "moments":
        return [p["q"], p["n"], p["H"], o["count"], o["sum_surj"], o["empirical_num"], o["empirical_den"],
                o["predicted_num"], o["predicted_den"], o["mode"]]
    if rec.kind == "components":
        return [p["rack"], p["boundary"], o["n"], o["count"], int(p["generate_full"])]
    if rec.kind == "rack":
        return [p["rack"], o["size"], o["components"], o["subracks"], int(o["quandle"]), o["nonsplitting"]]
    if rec.kind == "homology":
        return [p["rack"], p["d"], " ".join(map(str, o["betti"]))]
    if rec.kind == "bounds":
        return [p["c_size"], p["N0"], p["degU"], o["threshold"]]
    return [p["q"], p["f"], o["genus"], o["order"], o["structure"]]


def export_csv(store: Store, kind: str, out: str | os.PathLike) -> int:
    """Write one CSV row per record of ``kind``, ordered by (kind, digest, shard)."""
    if kind not in CSV_HEADERS:
        raise StoreError(f"unknown kind {kind!r}")
    recs = sorted(store.select(kind), key=lambda r: (r.kind, param_digest(r.kind, _unsharded(r.params)), r.shard or [], r.digest))
    rows = []
    for rec in recs:
        if rec.kind == "components":
            for n, count in sorted(rec.outputs["counts"].items(), key=lambda kv: int(kv[0])):
                rows.append(_csv_row(RunRecord(rec.kind, rec.params, {"n": int(n), "count": count}, digest=rec.digest, timestamp="")))
        else:
            rows.append(_csv_row(rec))
    with open(out, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADERS[kind])
        w.writerows(rows)
    return len(rows)


def _unsharded(params: dict) -> dict:
    return {k: v for k, v in params.items() if k != "shard"}


def dedupe(records: Iterable[RunRecord]) -> list[RunRecord]:
    seen: set[str] = set()
    out = []
    for r in records:
        if r.digest not in seen:
            seen.add(r.digest)
            out.append(r)
    return out
