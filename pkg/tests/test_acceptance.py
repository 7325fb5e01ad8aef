"""Acceptance criteria 1-9, one test per criterion.

Each test records a PASS/FAIL line, printed in the pytest terminal summary.
``python3 tests/test_acceptance.py`` runs just this file.  Everything is
exact: no tolerances anywhere.
"""

import collections
import functools
import itertools
import json
import os
import random
import signal
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import ACCEPTANCE
from fuzz import fuzzed_link, random_symmetry
from latticelinks.census import MANIFEST, build_report, load_records, run_census
from latticelinks.cli import main as cli_main
from latticelinks.core import (
    Axis,
    LatticeLink,
    LatticeSymmetry,
    apply_symmetry,
    canonicalize,
    linear_symmetries,
    parse_link,
    stick_counts,
    validate,
)
from latticelinks.diagram import PDCode
from latticelinks.enumeration import profiles_for
from latticelinks.invariants import NON_SPLIT, UNRECOGNIZED, fixture_pd, invariants_of, kauffman_bracket, reference_table
from latticelinks.leveling import is_extended_properly_leveled, level_all
from latticelinks.polynomial import BracketPoly
from oracles.bracket import brute_bracket

SRC = Path(__file__).resolve().parents[1] / "src"


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.time()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                ACCEPTANCE.append(f"criterion {number} FAIL  {title}: {type(exc).__name__}: {exc}"[:300])
                raise
            ACCEPTANCE.append(f"criterion {number} PASS  {title} ({detail}; {time.time() - t0:.0f}s)")

        return run

    return wrap


def _labels(records):
    return collections.Counter(r.label for r in records)


def _non_split(names):
    return {n for n in names if n in NON_SPLIT or n == UNRECOGNIZED}


def _census(out, max_sticks, components, **kw):
    run_census(out, max_sticks, components, **kw)
    report = build_report(out, sample=50)
    assert report.complete and report.ok, "census re-verification failed"
    return load_records(out), report


# --------------------------------------------------------------------------


@criterion(1, "n=4 census is only 0_1; no 5-stick polygon")
def test_criterion_1(tmp_path):
    records, report = _census(tmp_path / "c4", 4, (1,), min_sticks=4)
    assert _labels(records) == {"0_1": 1}
    assert all(profiles_for(5, m) == [] for m in (1, 2))
    # exhaustive: five vertices use at most five values per axis
    closed = 0
    values = range(5)

    def walk(vs):
        nonlocal closed
        if len(vs) == 5:
            if sum(a != b for a, b in zip(vs[-1], vs[0])) == 1:
                closed += 1
                assert not validate(LatticeLink.from_vertices(vs)).ok, vs
            return
        last = vs[-1]
        for ax in range(3):
            for val in values:
                if val != last[ax]:
                    v = list(last)
                    v[ax] = val
                    walk(vs + [tuple(v)])

    for v0 in itertools.product(values, repeat=3):
        walk([v0])
    return f"1 link at n=4; {closed} closed 5-vertex walks, none valid"


@criterion(2, "n<=8, >=2 components: only 2_1^2, first at 8")
def test_criterion_2(tmp_path):
    records, report = _census(tmp_path / "c8", 8, (2,))
    ns = _non_split(_labels(records))
    assert ns == {"2_1^2"}
    assert report.first["2_1^2"] == 8
    assert {r.sticks for r in records if r.label == "2_1^2"} == {8}
    return f"{len(records)} records, {_labels(records)['2_1^2']} Hopf embeddings at n=8"


@criterion(3, "9<=n<=11, >=2 components: nothing non-split but 2_1^2 (unconstrained)")
def test_criterion_3(tmp_path):
    records, report = _census(tmp_path / "c11", 11, (2,), min_sticks=9)
    assert report.mode == "unconstrained"
    # components have 4 or at least 6 sticks, so two need at least 10
    assert profiles_for(9, 2) == []
    assert {r.sticks for r in records} == {10, 11}
    assert _non_split(_labels(records)) == {"2_1^2"}
    return f"{len(records)} records, mode unconstrained"


@pytest.mark.slow
@criterion(4, "n=12 arrivals: 3_1, 2_1^2#2_1^2, 6_2^3, 6_3^3; nothing outside the table")
def test_criterion_4(tmp_path):
    records, report = _census(tmp_path / "c12", 12, (1, 2, 3), min_sticks=12)
    labels = _labels(records)
    table = reference_table()
    assert UNRECOGNIZED not in labels
    assert set(labels) <= set(table)
    for name, m in (("3_1", 1), ("2_1^2#2_1^2", 3), ("6_2^3", 3), ("6_3^3", 3)):
        hits = [r for r in records if r.label == name]
        assert hits, f"no {name} at n=12"
        assert {r.components for r in hits} == {m}
        link = parse_link(hits[0].link)
        assert validate(link).ok and stick_counts(link).total == 12
    assert _non_split(labels) == {"2_1^2", "2_1^2#2_1^2", "6_2^3", "6_3^3"}
    found = ", ".join(f"{n} x{labels[n]}" for n in ("3_1", "2_1^2#2_1^2", "6_2^3", "6_3^3"))
    return f"{len(records)} records; {found}"


def _witness(tmp_path, name, n, capsys):
    out = tmp_path / f"{name}.link"
    args = ["witness", name, "--min-sticks", str(n), "--max-sticks", str(n), "--mode", "constrained", "-o", str(out)]
    assert cli_main(args) == 0
    capsys.readouterr()
    assert cli_main(["validate", str(out)]) == 0
    capsys.readouterr()
    assert cli_main(["classify", str(out)]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["label"] == name and sum(rec["counts"]) == n
    link = parse_link(out.read_text())
    assert validate(link).ok and stick_counts(link).total == n


@pytest.mark.slow
@criterion(5, "witnesses 4_1^2 at 13 and 5_1^2 at 14; constrained search: 5_1^2 absent at 13, present at 14")
def test_criterion_5(tmp_path, capsys):
    _witness(tmp_path, "4_1^2", 13, capsys)
    _witness(tmp_path, "5_1^2", 14, capsys)
    args = ["witness", "5_1^2", "--min-sticks", "13", "--max-sticks", "13", "--mode", "constrained"]
    assert cli_main(args) == 1
    assert "no 5_1^2 witness" in capsys.readouterr().out
    r13, _ = _census(tmp_path / "k13", 13, (2,), mode="constrained", min_sticks=13)
    assert {r.profile for r in r13} == {(5, 4, 4)}
    assert "5_1^2" not in _labels(r13)
    assert "4_1^2" in _labels(r13)
    r14, _ = _census(tmp_path / "k14", 14, (2,), mode="constrained", min_sticks=14)
    assert {r.profile for r in r14} == {(5, 5, 4), (6, 4, 4)}
    assert "5_1^2" in _labels(r14)
    assert all(r.mode == "constrained" for r in r13 + r14)
    return f"constrained: n=13 {len(r13)} records, n=14 {len(r14)} records with 5_1^2 x{_labels(r14)['5_1^2']}"


@criterion(6, "level_all on 1000 fuzzed links keeps counts and jones_A; output extended properly leveled")
def test_criterion_6():
    rng = random.Random(2026)
    for _ in range(1000):
        link = apply_symmetry(fuzzed_link(rng), random_symmetry(rng))
        out = level_all(link)
        assert stick_counts(out) == stick_counts(link)
        assert invariants_of(out).jones == invariants_of(link).jones
        assert all(is_extended_properly_leveled(out, a) for a in Axis)
    return "1000 links"


@criterion(7, "bracket oracles; jones_A axis-independent on the n<=10 census; reflection mirrors")
def test_criterion_7(tmp_path):
    d = BracketPoly.loop()
    for k in range(1, 7):
        assert kauffman_bracket(PDCode((), (), k)) == d ** (k - 1)
        assert brute_bracket(PDCode((), (), k)) == d ** (k - 1)
    hopf = fixture_pd("2_1^2")
    assert brute_bracket(hopf) == BracketPoly({4: -1, -4: -1}) == kauffman_bracket(hopf)
    records, _ = _census(tmp_path / "c10", 10, (1, 2))
    flip = LatticeSymmetry((0, 1, 2), (1, 1, -1))
    for r in records:
        link = parse_link(r.link)
        js = {invariants_of(link, a).jones for a in Axis}
        assert len(js) == 1, r.link
        (j,) = js
        img = apply_symmetry(link, flip)
        assert {invariants_of(img, a).jones for a in Axis} == {j.mirror()}, r.link
    return f"{len(records)} census links x 3 axes"


@criterion(8, "canonicalize orbit-constant and idempotent: 1000 fuzzed links x 48 symmetries")
def test_criterion_8():
    rng = random.Random(48)
    maps = linear_symmetries()
    for _ in range(1000):
        link = fuzzed_link(rng)
        c = canonicalize(link)
        assert canonicalize(c) == c
        for g in maps:
            t = tuple(rng.randint(-50, 50) for _ in range(3))
            assert canonicalize(apply_symmetry(link, g.with_translation(t))) == c
    return "48000 images"


def _census_cmd(out):
    return [sys.executable, "-m", "latticelinks", "census", "--max-sticks", "10", "--components", "all",
            "--out", str(out), "-q"]


def _done(out):
    try:
        return len(json.loads((out / MANIFEST).read_text())["done"])
    except (OSError, ValueError, KeyError):
        return 0


@criterion(9, "census killed at 3 random points and resumed equals an uninterrupted run (n<=10)")
def test_criterion_9(tmp_path):
    env = dict(os.environ, PYTHONPATH=str(SRC) + os.pathsep + os.environ.get("PYTHONPATH", ""))
    whole, part = tmp_path / "whole", tmp_path / "part"
    assert subprocess.run(_census_cmd(whole), env=env, capture_output=True).returncode == 0
    total = len(json.loads((whole / MANIFEST).read_text())["units"])
    rng = random.Random(9)
    points = sorted(rng.sample(range(1, total - 1), 3))
    kills = []
    for target in points:
        proc = subprocess.Popen(_census_cmd(part), env=env, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
        while proc.poll() is None and _done(part) < target:
            time.sleep(0.005)
        assert proc.poll() is None, "run finished before the kill point"
        # a random extra delay lands the kill inside a unit as well as between units
        time.sleep(rng.uniform(0, 0.05))
        proc.send_signal(signal.SIGKILL)
        proc.wait()
        kills.append(_done(part))
    assert kills == sorted(kills) and kills[-1] < total
    assert subprocess.run(_census_cmd(part), env=env, capture_output=True).returncode == 0
    a = collections.Counter(r.to_line() for r in load_records(whole))
    b = collections.Counter(r.to_line() for r in load_records(part))
    assert a == b
    return f"{total} units, killed after {kills} done, {sum(b.values())} records identical"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
