import collections
import random

import pytest

from conftest import H8, U4
from latticelinks.core import Axis, Component, LatticeLink, canonicalize, stick_counts, validate
from latticelinks.enumeration import (
    PartialEmbedding,
    PlanarComponentInfo,
    Profile,
    WorkUnit,
    enumerate_leveled,
    minimal_witness,
    necklaces,
    planar_info,
    profiles_for,
    prune_planar,
    prune_profile,
    run_shard,
    shards,
)
from latticelinks.invariants import classify
from latticelinks.leveling import is_extended_properly_leveled, level_map
from oracles.grow import grow_enumerate


def _types(profile, **kw):
    return collections.Counter(classify(link).name for link in enumerate_leveled(profile, **kw))


def test_profile_str():
    assert str(Profile((4, 2, 2), 1)) == "(4,2,2) m=1"
    assert str(Profile((2, 2, 4), 2, (4, 4))) == "(2,2,4) m=2 partition=4+4"
    with pytest.raises(ValueError):
        Profile((2, 2, 0), 2, (4, 4))


def test_profiles_for():
    assert [p.counts for p in profiles_for(4, 1)] == [(2, 2, 0)]
    assert profiles_for(5, 1) == []
    assert [p.counts for p in profiles_for(8, 2)] == [(4, 2, 2), (4, 4, 0)]
    ordered = profiles_for(6, 1, ordered=True)
    assert len(ordered) == 4 and all(p.total == 6 for p in ordered)
    assert [p.counts for p in profiles_for(13, 2, constrained=True)] == [(5, 4, 4)]
    assert [p.counts for p in profiles_for(14, 2, constrained=True)] == [(5, 5, 4), (6, 4, 4)]


def test_necklaces():
    assert necklaces((2, 2, 0)) == ((0, 1, 0, 1),)
    assert necklaces((1, 1, 0)) == ((0, 1),)
    assert necklaces((3, 1, 0)) == ()
    # every word has the right counts and no equal neighbours
    for w in necklaces((2, 2, 2)):
        assert sorted(w) == [0, 0, 1, 1, 2, 2]
        assert all(w[i] != w[i - 1] for i in range(len(w)))


def test_unknot_square():
    links = list(enumerate_leveled(Profile((2, 2, 0), 1)))
    assert len(links) == 1
    assert canonicalize(links[0]) == canonicalize(U4)
    assert _types(Profile((2, 2, 0), 1)) == {"0_1": 1}


def test_hopf_profile():
    found = _types(Profile((2, 4, 2), 2))
    assert found["2_1^2"] >= 1
    assert canonicalize(H8) in {canonicalize(link) for link in enumerate_leveled(Profile((4, 2, 2), 2))}


def test_no_non_split_below_eight():
    for n in range(4, 8):
        for m in (2, 3):
            for p in profiles_for(n, m):
                assert all(not classify(link).is_non_split_link for link in enumerate_leveled(p))


def test_impossible_profile_is_empty():
    p = Profile((1, 1, 1), 1)
    assert shards(p) == []
    assert list(enumerate_leveled(p)) == []


def test_outputs_are_leveled_and_canonical():
    for profile in (Profile((3, 3, 2), 1), Profile((4, 2, 2), 2), Profile((2, 2, 2), 1)):
        seen = set()
        for link in enumerate_leveled(profile):
            assert validate(link).ok
            assert stick_counts(link) == profile.counts
            assert len(link) == profile.components
            assert all(is_extended_properly_leveled(link, a) for a in Axis)
            # levels are 0..N-1 without gaps
            for a in Axis:
                lv = level_map(link, a).levels
                assert lv == list(range(len(lv)))
            key = canonicalize(link, preserve_counts=True)
            assert key == link
            assert key not in seen
            seen.add(key)


@pytest.mark.parametrize(
    "counts,m",
    [((2, 2, 2), 1), ((3, 3, 2), 1), ((4, 2, 2), 1), ((3, 3, 3), 1), ((4, 2, 2), 2), ((2, 2, 4), 2), ((4, 3, 3), 1)],
)
def test_matches_grow_oracle(counts, m):
    ours = sorted(tuple(c.vertices for c in link.components) for link in enumerate_leveled(Profile(counts, m)))
    theirs = sorted(grow_enumerate(counts, m))
    assert ours == theirs


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_shard_union(depth):
    profile = Profile((4, 3, 3), 1)
    whole = sorted(tuple(c.vertices for c in link.components) for link in enumerate_leveled(profile))
    units = shards(profile, depth)
    parts = [comps for u in units for comps in run_shard(u)]
    assert sorted(parts) == whole
    assert len(set(parts)) == len(parts)


def test_shard_union_two_components():
    profile = Profile((4, 2, 2), 2)
    whole = sorted(tuple(c.vertices for c in link.components) for link in enumerate_leveled(profile))
    parts = sorted(comps for u in shards(profile, 3) for comps in run_shard(u))
    assert parts == whole


def test_work_unit_round_trip():
    for u in shards(Profile((4, 3, 3), 1), 3)[:20] + shards(Profile((4, 2, 2), 2), 2):
        assert WorkUnit.parse(u.describe()) == u
    with pytest.raises(ValueError):
        shards(Profile((2, 2, 0), 1), 0)
    with pytest.raises(ValueError):
        shards(Profile((2, 2, 0), 1), mode="fast")


def test_pruning_keeps_types():
    for n in range(4, 11):
        for m in (1, 2):
            for p in profiles_for(n, m):
                assert set(_types(p)) == set(_types(p, prune=False)), p


def test_prune_profile_examples():
    assert prune_profile(PartialEmbedding((2, 2, 0), 1))
    assert not prune_profile(PartialEmbedding((3, 1, 0), 1))
    assert not prune_profile(PartialEmbedding((2, 2, 0), 2))  # too few sticks for two
    assert prune_profile(PartialEmbedding((4, 2, 2), 2, closed=[(0, 1, 0, 1)]))
    assert not prune_profile(PartialEmbedding((4, 2, 2), 2, closed=[(0, 1, 0, 1, 0, 1)]))
    over = PartialEmbedding((4, 2, 2), 1, tallies=[{0: 3}, {}, {}])
    assert not prune_profile(over)
    # an open component holding the only x-stick can never close
    assert not prune_profile(PartialEmbedding((1, 4, 4), 2, open_word=[0, 1]))
    clash = PartialEmbedding((4, 2, 2), 2, tallies=[{1: 2}, {}, {}], reserved=[{1}, set(), set()])
    assert not prune_profile(clash)


def test_planar_info_hopf():
    info = planar_info(H8, 0)
    assert info.normal == 2 and info.level == 0
    assert info.perpendicular == 2 and info.bounded == 1 and info.unbounded == 1
    assert not prune_planar(H8, info)
    assert planar_info(H8, 1).normal == 0
    assert planar_info(LatticeLink.from_vertices([(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1), (0, 1, 1), (0, 0, 1)]), 0) is None


def test_prune_planar_accepts_double_piercing():
    # a square in z=0 pierced twice inside and twice outside
    square = [(0, 0, 0), (3, 0, 0), (3, 3, 0), (0, 3, 0)]
    other = [(1, 1, -1), (1, 1, 1), (4, 1, 1), (4, 1, -1), (4, 2, -1), (4, 2, 1), (2, 2, 1), (2, 2, -1), (2, 1, -1)]
    link = LatticeLink.from_vertices(square, other)
    assert validate(link).ok
    info = planar_info(link, 0)
    assert (info.perpendicular, info.bounded, info.unbounded) == (4, 2, 2)
    assert prune_planar(link, info)


def test_prune_planar_rejects():
    # unpierced: a split pair of squares
    far = LatticeLink.from_vertices(
        [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)],
        [(5, 5, 1), (6, 5, 1), (6, 5, 2), (5, 5, 2)],
    )
    info = planar_info(far, 0)
    assert info.bounded == info.unbounded == 0
    assert not prune_planar(far, info)
    five = PlanarComponentInfo(0, 2, 0, ((0, 0), (3, 0), (3, 3), (0, 3)), 2, 3, 5)
    assert not prune_planar(far, five)


def test_two_nonplanar_components_at_twelve():
    from latticelinks.enumeration import _component_splits

    for p in profiles_for(12, 2):
        for split in _component_splits(p.counts, 2, True):
            if all(min(c) > 0 for c in split):
                assert p.counts == (4, 4, 4) and split == ((2, 2, 2), (2, 2, 2))


def test_square_profile_shards():
    p = Profile((2, 2, 0), 1)
    units = shards(p, 1)
    assert 1 <= len(units) <= 3
    assert sorted(c for u in units for c in run_shard(u)) == sorted(
        tuple(c.vertices for c in link.components) for link in enumerate_leveled(p)
    )


def test_constrained_mode_is_restrictive():
    p = Profile((4, 4, 4), 2)
    free = shards(p)
    con = shards(p, mode="constrained")
    assert {u.words for u in con} <= {u.words for u in free}
    # on planar word tuples constrained mode keeps exactly what passes the piercing test
    planar = [u for u in con if any(0 in w and len(set(w)) == 2 for w in u.words)][:3]
    assert planar
    removed = 0
    for u in planar:
        full = run_shard(WorkUnit(p, u.words))
        kept = set(run_shard(u))
        for comps in full:
            link = LatticeLink(tuple(Component(c) for c in comps))
            infos = [planar_info(link, i) for i in range(len(link))]
            ok = all(i is None or prune_planar(link, i) for i in infos)
            assert (comps in kept) == ok
            removed += not ok
        assert kept <= set(full)
    assert removed


def test_minimal_witness():
    link, n = minimal_witness("0_1", 10)
    assert n == 4 and classify(link).name == "0_1"
    link, n = minimal_witness("2_1^2", 10)
    assert n == 8 and classify(link).name == "2_1^2"
    assert minimal_witness("4_1^2", 9) is None
    with pytest.raises(KeyError):
        minimal_witness("7_1", 10)


def test_trefoil_needs_twelve():
    link, n = minimal_witness("3_1", 12)
    assert n == 12 and stick_counts(link) == (4, 4, 4)
    assert classify(link).name == "3_1"


def test_random_outputs_reclassify_after_symmetry():
    from fuzz import random_symmetry
    from latticelinks.core import apply_symmetry

    rng = random.Random(0)
    links = list(enumerate_leveled(Profile((4, 3, 3), 1)))
    for link in rng.sample(links, 25):
        moved = apply_symmetry(link, random_symmetry(rng))
        assert classify(moved) == classify(link)
        assert canonicalize(moved) == canonicalize(link)
