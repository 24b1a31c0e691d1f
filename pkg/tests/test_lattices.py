"""Lattice (Z^n subgroup) tests with brute-force membership oracles."""

import math
import random

import pytest

from commsol.errors import InfiniteIndexError, PreconditionError
from commsol.lattices import (
    Lattice,
    contains,
    enumerate_lattices,
    format_lattice,
    from_generators,
    index,
    intersect,
    is_subgroup,
    lcm_range,
    parse_lattice,
    profinite_kernel,
    whole_group,
)


def residues_mod(gens, n, mod):
    """Oracle: the subgroup's image in (Z/mod)^n, spanned by BFS."""
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        v = frontier.pop()
        for g in gens:
            for sign in (1, -1):
                w = tuple((v[i] + sign * g[i]) % mod for i in range(n))
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
    return seen


def test_from_generators_examples():
    lat = from_generators([(2, 0), (0, 3)])
    assert lat.cols == ((2, 0), (0, 3))
    assert index(lat) == 6

    assert from_generators([(1, 0), (0, 1)]) == whole_group(2)

    lat = from_generators([(2, 0), (1, 1), (0, 2)])
    assert index(lat) == 2
    # oracle: the subgroup's residues mod 4 determine membership (4Z^2 <= L)
    res = residues_mod([(2, 0), (1, 1), (0, 2)], 2, 4)
    assert len(res) == 16 // 2
    for x in range(4):
        for y in range(4):
            assert contains(lat, (x, y)) == ((x, y) in res)


def test_from_generators_rank_deficient():
    with pytest.raises(InfiniteIndexError):
        from_generators([(1, 2), (2, 4)])
    with pytest.raises(InfiniteIndexError):
        from_generators([], 2)


def det2(a, b, c, d):
    return a * d - b * c


def test_index_examples():
    assert index(from_generators([(2, 0), (0, 3)])) == 6
    assert index(whole_group(3)) == 1
    lat = from_generators([(2, 1), (0, 5)])
    assert index(lat) == abs(det2(2, 0, 1, 5)) == 10


def test_membership_and_intersection_examples():
    l1 = from_generators([(2, 0), (0, 1)])
    l2 = from_generators([(1, 0), (0, 3)])
    meet = intersect(l1, l2)
    assert meet == from_generators([(2, 0), (0, 3)])
    assert index(meet) == 6
    # oracle: brute-force over residues mod 6
    res1 = residues_mod(l1.cols, 2, 6)
    res2 = residues_mod(l2.cols, 2, 6)
    resm = residues_mod(meet.cols, 2, 6)
    assert resm == res1 & res2

    assert intersect(l1, l1) == l1
    assert contains(from_generators([(2, 0), (0, 3)]), (2, 3))
    assert is_subgroup(meet, l1) and is_subgroup(meet, l2)


def test_intersection_properties_random():
    rng = random.Random(19)
    for _ in range(60):
        n = rng.choice([1, 2, 3])
        gens1 = [[rng.randrange(-4, 5) for _ in range(n)] for _ in range(n + 1)]
        gens2 = [[rng.randrange(-4, 5) for _ in range(n)] for _ in range(n + 1)]
        try:
            l1, l2 = from_generators(gens1, n), from_generators(gens2, n)
        except InfiniteIndexError:
            continue
        meet = intersect(l1, l2)
        assert is_subgroup(meet, l1) and is_subgroup(meet, l2)
        lcm = index(l1) * index(l2) // math.gcd(index(l1), index(l2))
        assert index(meet) % lcm == 0


def test_canonicality_under_permutation():
    rng = random.Random(23)
    for _ in range(50):
        n = rng.choice([2, 3])
        gens = [[rng.randrange(-5, 6) for _ in range(n)] for _ in range(n)]
        try:
            lat = from_generators(gens, n)
        except InfiniteIndexError:
            continue
        cols = list(lat.cols)
        rng.shuffle(cols)
        assert from_generators(cols, n) == lat


def test_contains_matches_residue_oracle():
    rng = random.Random(31)
    for _ in range(40):
        n = rng.choice([1, 2, 3])
        gens = [[rng.randrange(-6, 7) for _ in range(n)] for _ in range(n)]
        try:
            lat = from_generators(gens, n)
        except InfiniteIndexError:
            continue
        mod = index(lat)
        res = residues_mod(lat.cols, n, mod)
        for _ in range(40):
            v = tuple(rng.randrange(-10, 11) for _ in range(n))
            assert contains(lat, v) == (tuple(x % mod for x in v) in res)


def test_enumerate_examples():
    lats = enumerate_lattices(1, 4)
    assert [c.cols[0][0] for c in lats] == [1, 2, 3, 4]

    assert enumerate_lattices(2, 1) == [whole_group(2)]

    lats = enumerate_lattices(2, 2)
    assert len(lats) == 4
    assert len(set(lats)) == 4
    # oracle count: HNF matrices with det 2 in dimension 2: diag (1,2) has one
    # free entry mod 2, diag (2,1) has none
    assert sum(1 for c in lats if index(c) == 2) == 2 + 1


def test_profinite_kernel_examples():
    assert profinite_kernel(1, 4).cols[0][0] == lcm_range(4) == 12
    assert profinite_kernel(1, 1) == whole_group(1)
    assert profinite_kernel(2, 2) == from_generators([(2, 0), (0, 2)])


def test_profinite_kernel_z1_brute_force():
    for n in range(1, 9):
        ker = profinite_kernel(1, n)
        assert ker.cols[0][0] == lcm_range(n)
        for v in range(-50, 51):
            member_oracle = all(v % m == 0 for m in range(1, n + 1))
            assert contains(ker, (v,)) == member_oracle


def test_dimension_mismatch():
    with pytest.raises(PreconditionError):
        contains(whole_group(2), (1, 2, 3))
    with pytest.raises(PreconditionError):
        intersect(whole_group(2), whole_group(3))


def test_text_round_trip():
    rng = random.Random(41)
    for _ in range(30):
        n = rng.choice([1, 2, 3])
        gens = [[rng.randrange(-5, 6) for _ in range(n)] for _ in range(n)]
        try:
            lat = from_generators(gens, n)
        except InfiniteIndexError:
            continue
        assert parse_lattice(format_lattice(lat)) == lat
