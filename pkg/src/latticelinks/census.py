"""Persistent, sharded, resumable census runs and their reports.

Layout of a census directory::

    manifest.json        parameters, work units, completed unit ids
    shards/<id>.jsonl    one record per line for each completed unit

Shard files are written to a temporary name and renamed into place, and the
manifest is rewritten the same way after every unit, so a killed run loses
at most the units in flight.
"""

from __future__ import annotations

import hashlib
import json
import logging
import multiprocessing
import os
import random
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from . import __version__
from .core import LatticeLink, parse_link, serialize_link, stick_counts
from .enumeration import MODES, Profile, WorkUnit, profiles_for, run_shard, shards
from .invariants import (
    UNRECOGNIZED,
    CrossingBudgetExceeded,
    NON_SPLIT,
    invariants_of,
    label_from_invariants,
)

__all__ = [
    "CensusManifest",
    "CensusRecord",
    "CensusReport",
    "VerificationError",
    "build_report",
    "load_records",
    "run_census",
]

log = logging.getLogger(__name__)

MANIFEST = "manifest.json"
SHARD_DIR = "shards"


class VerificationError(RuntimeError):
    pass


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


@dataclass(frozen=True)
class CensusRecord:
    link: str  # canonical serialization
    counts: tuple
    crossings: int
    axis: str
    linking: tuple
    jones_lo: int
    jones: tuple  # dense coefficients from A^jones_lo upwards
    label: str
    chirality: Optional[str]
    profile: tuple
    components: int
    mode: str
    reason: Optional[str] = None  # why a link is unrecognized, if known

    @property
    def sticks(self) -> int:
        return sum(self.counts)

    @classmethod
    def from_link(cls, link: LatticeLink, profile: Profile, mode: str) -> "CensusRecord":
        text = serialize_link(link)
        counts = tuple(stick_counts(link))
        try:
            inv = invariants_of(link)
        except CrossingBudgetExceeded as exc:
            return cls(text, counts, -1, "", (), 0, (), UNRECOGNIZED, None, profile.counts,
                       len(link.components), mode, f"crossing budget: {exc}")
        lab = label_from_invariants(inv)
        lo, coeffs = inv.jones.coefficients()
        return cls(
            text,
            counts,
            inv.crossings,
            inv.axis.name.lower(),
            tuple(tuple(r) for r in inv.linking),
            lo,
            tuple(coeffs),
            lab.name,
            lab.chirality,
            profile.counts,
            len(link.components),
            mode,
        )

    def to_line(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_line(cls, line: str) -> "CensusRecord":
        d = json.loads(line)
        d["counts"] = tuple(d["counts"])
        d["profile"] = tuple(d["profile"])
        d["linking"] = tuple(tuple(r) for r in d["linking"])
        d["jones"] = tuple(d["jones"])
        return cls(**d)

    def recompute(self) -> "CensusRecord":
        link = parse_link(self.link)
        return CensusRecord.from_link(link, Profile(self.profile, self.components), self.mode)

    def verify(self) -> bool:
        """Does reclassifying the stored link reproduce this record?"""
        try:
            return self.recompute() == self
        except ValueError:
            return False


def _unit_id(unit: WorkUnit) -> str:
    return hashlib.sha1(unit.describe().encode()).hexdigest()[:16]


@dataclass
class CensusManifest:
    max_sticks: int
    components: tuple
    mode: str
    version: str = __version__
    min_sticks: int = 4
    profile: Optional[tuple] = None  # restrict to one ordered profile
    units: dict = field(default_factory=dict)  # id -> descriptor
    done: set = field(default_factory=set)

    @property
    def complete(self) -> bool:
        return set(self.units) <= self.done

    def to_json(self) -> str:
        d = {
            "version": self.version,
            "mode": self.mode,
            "max_sticks": self.max_sticks,
            "min_sticks": self.min_sticks,
            "components": list(self.components),
            "profile": list(self.profile) if self.profile else None,
            "units": dict(sorted(self.units.items())),
            "done": sorted(self.done),
        }
        return json.dumps(d, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CensusManifest":
        d = json.loads(text)
        return cls(
            d["max_sticks"],
            tuple(d["components"]),
            d["mode"],
            d["version"],
            d.get("min_sticks", 4),
            tuple(d["profile"]) if d.get("profile") else None,
            dict(d["units"]),
            set(d["done"]),
        )

    def same_parameters(self, other: "CensusManifest") -> bool:
        return (self.max_sticks, self.min_sticks, self.components, self.mode, self.profile) == (
            other.max_sticks,
            other.min_sticks,
            other.components,
            other.mode,
            other.profile,
        )

    def profiles(self) -> list:
        out = []
        constrained = self.mode == "constrained"
        for n in range(self.min_sticks, self.max_sticks + 1):
            for m in self.components:
                if self.profile is not None:
                    if sum(self.profile) == n:
                        out.append(Profile(self.profile, m))
                    continue
                out.extend(profiles_for(n, m, constrained=constrained))
        return out

    def plan(self) -> None:
        for profile in self.profiles():
            for unit in shards(profile, 1, self.mode):
                self.units[_unit_id(unit)] = unit.describe()


def _work(item):
    uid, descriptor = item
    unit = WorkUnit.parse(descriptor)
    lines = []
    for comps in run_shard(unit):
        link = LatticeLink.from_vertices(*comps)
        lines.append(CensusRecord.from_link(link, unit.profile, unit.mode).to_line())
    return uid, lines


def run_census(
    out_dir,
    max_sticks: int,
    components: Iterable[int],
    mode: str = "unconstrained",
    jobs: int = 1,
    profile: Optional[tuple] = None,
    min_sticks: int = 4,
    progress=None,
) -> CensusManifest:
    """Run (or resume) a census into ``out_dir``; returns the final manifest."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    out = Path(out_dir)
    (out / SHARD_DIR).mkdir(parents=True, exist_ok=True)
    fresh = CensusManifest(max_sticks, tuple(sorted(set(components))), mode, min_sticks=min_sticks,
                           profile=tuple(profile) if profile else None)
    mpath = out / MANIFEST
    if mpath.exists():
        manifest = CensusManifest.from_json(mpath.read_text())
        if not manifest.same_parameters(fresh):
            raise ValueError(f"{out} holds a census with different parameters")
        if manifest.version != __version__:
            raise ValueError(f"{out} was written by version {manifest.version}")
    else:
        manifest = fresh
        manifest.plan()
        _atomic_write(mpath, manifest.to_json())
    todo = [(uid, d) for uid, d in sorted(manifest.units.items()) if uid not in manifest.done]
    log.info("%d of %d units to run", len(todo), len(manifest.units))

    def store(uid, lines):
        _atomic_write(out / SHARD_DIR / f"{uid}.jsonl", "".join(line + "\n" for line in lines))
        manifest.done.add(uid)
        _atomic_write(mpath, manifest.to_json())
        if progress:
            progress(len(manifest.done), len(manifest.units))

    if jobs <= 1:
        for item in todo:
            store(*_work(item))
    else:
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            for uid, lines in pool.imap_unordered(_work, todo, chunksize=1):
                store(uid, lines)
    return manifest


def load_records(out_dir) -> list:
    out = Path(out_dir)
    manifest = CensusManifest.from_json((out / MANIFEST).read_text())
    records = []
    for uid in sorted(manifest.done):
        path = out / SHARD_DIR / f"{uid}.jsonl"
        with open(path, encoding="utf-8") as fh:
            records.extend(CensusRecord.from_line(line) for line in fh if line.strip())
    return records


@dataclass
class CensusReport:
    mode: str
    complete: bool
    per_n: dict  # n -> {label: count}
    first: dict  # label -> n
    records: int
    checked: int
    failures: list  # link texts of records that failed re-verification
    duplicates: int

    @property
    def ok(self) -> bool:
        return not self.failures and not self.duplicates

    def to_json(self) -> str:
        d = {
            "mode": self.mode,
            "complete": self.complete,
            "records": self.records,
            "checked": self.checked,
            "failures": len(self.failures),
            "duplicates": self.duplicates,
            "per_n": {str(n): dict(sorted(v.items())) for n, v in sorted(self.per_n.items())},
            "first_appearance": dict(sorted(self.first.items(), key=lambda kv: (kv[1], kv[0]))),
        }
        return json.dumps(d, indent=1, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"mode: {self.mode}" + ("" if self.complete else " (incomplete)")]
        lines.append(f"records: {self.records}, re-verified: {self.checked}, failures: {len(self.failures)}")
        lines.append("")
        lines.append("n    labels")
        for n in sorted(self.per_n):
            cells = ", ".join(f"{k} x{v}" for k, v in sorted(self.per_n[n].items()))
            lines.append(f"{n:<4} {cells}")
        lines.append("")
        lines.append("first appearance")
        for name, n in sorted(self.first.items(), key=lambda kv: (kv[1], kv[0])):
            tag = " (non-split)" if name in NON_SPLIT or name == UNRECOGNIZED else ""
            lines.append(f"{name:<24} {n}{tag}")
        return "\n".join(lines) + "\n"


def build_report(out_dir, sample: int = 20, seed: int = 0) -> CensusReport:
    """Summarize a census and re-verify ``sample`` records (all if negative)."""
    out = Path(out_dir)
    mpath = out / MANIFEST
    if not mpath.exists():
        return CensusReport("", True, {}, {}, 0, 0, [], 0)
    manifest = CensusManifest.from_json(mpath.read_text())
    records = load_records(out)
    per_n = defaultdict(lambda: defaultdict(int))
    first = {}
    seen = set()
    dup = 0
    for r in records:
        n = r.sticks
        per_n[n][r.label] += 1
        if r.label not in first or n < first[r.label]:
            first[r.label] = n
        if r.link in seen:
            dup += 1
        seen.add(r.link)
    if sample < 0 or sample >= len(records):
        picked = records
    else:
        picked = random.Random(seed).sample(records, sample)
    failures = [r.link for r in picked if not r.verify()]
    return CensusReport(
        manifest.mode,
        manifest.complete,
        {n: dict(v) for n, v in per_n.items()},
        first,
        len(records),
        len(picked),
        failures,
        dup,
    )
