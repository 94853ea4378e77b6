import pytest
from hypothesis import given, settings, strategies as st

from sidon_complex.errors import MalformedInputError, ModulusTooSmallError, NotSidonError
from sidon_complex.sidon import (
    CollisionPair,
    admissible_triples,
    alternating_collisions,
    greedy_extend,
    n_double_zero,
    n_zero,
    verify_sidon,
    verify_sidon_mod,
)

from oracles import collision_buckets, collision_pair_count, greedy_next, is_sidon

sequences = st.lists(st.integers(0, 60), min_size=1, max_size=7, unique=True).map(sorted)


@pytest.mark.parametrize(
    "seq, expected",
    [((0, 2, 7, 8, 11), True), ((0,), True), ((0, 1, 2), False), ((0, 1, 3, 7, 12), True)],
)
def test_verify_sidon_examples(seq, expected):
    assert verify_sidon(seq) is expected


@pytest.mark.parametrize(
    "seq, N, expected",
    [
        ((0, 2, 7), 8, True),
        ((0, 1, 3), 6, False),
        ((0, 1, 3, 7, 20), 35, True),
        ((0, 1, 3), 7, True),
    ],
)
def test_verify_sidon_mod_examples(seq, N, expected):
    assert verify_sidon_mod(seq, N) is expected


def test_zero_one_three_fails_below_seven():
    assert [verify_sidon_mod((0, 1, 3), N) for N in range(2, 8)] == [False] * 5 + [True]


def test_modulus_below_two_rejected():
    with pytest.raises(ModulusTooSmallError):
        verify_sidon_mod((0, 1), 1)


@pytest.mark.parametrize("bad", [(), (1, 1), (3, 2), (-1, 4)])
def test_malformed_sequences(bad):
    with pytest.raises(MalformedInputError):
        verify_sidon(bad)


@given(sequences)
def test_verify_sidon_matches_brute_force(seq):
    assert verify_sidon(seq) == is_sidon(seq)


@given(sequences, st.integers(2, 150))
def test_verify_sidon_mod_matches_brute_force(seq, N):
    assert verify_sidon_mod(seq, N) == is_sidon(seq, N)


def test_mian_chowla_prefix():
    assert greedy_extend((0,), 10) == (0, 1, 3, 7, 12, 20, 30, 44, 65, 80, 96)


def test_zero_term_extension_is_identity():
    assert greedy_extend((0, 1, 3), 0) == (0, 1, 3)


def test_next_term_after_0_2_7_8_11():
    # frozen from an exhaustive scan of integers above 11
    assert greedy_extend((0, 2, 7, 8, 11), 1) == (0, 2, 7, 8, 11, 21)


def test_greedy_extend_rejects_non_sidon():
    with pytest.raises(NotSidonError):
        greedy_extend((0, 1, 2), 1)


@settings(max_examples=40)
@given(st.lists(st.integers(0, 30), min_size=1, max_size=4, unique=True).map(sorted).filter(is_sidon), st.integers(1, 4))
def test_greedy_terms_are_least_admissible(seq, count):
    out = greedy_extend(seq, count)
    assert out[: len(seq)] == tuple(seq)
    assert is_sidon(out)
    for k in range(len(seq), len(out)):
        assert out[k] == greedy_next(list(out[:k]))


@pytest.mark.parametrize("seq, n0", [((0, 1, 3), 7), ((0, 2, 7), 15), ((0, 1), 3)])
def test_n_zero(seq, n0):
    assert n_zero(seq) == n0


@pytest.mark.parametrize("seq, n00", [((0, 1, 3), 7), ((0, 2, 7), 8), ((0, 1), 3)])
def test_n_double_zero(seq, n00):
    assert n_double_zero(seq) == n00


@settings(max_examples=60)
@given(st.lists(st.integers(0, 40), min_size=2, max_size=6, unique=True).map(sorted).filter(is_sidon))
def test_threshold_behaviour(seq):
    seq = [a - seq[0] for a in seq]
    top = 2 * seq[-1]
    assert not verify_sidon_mod(seq, top)
    assert all(verify_sidon_mod(seq, N) for N in range(top + 1, top + 30))
    n00 = n_double_zero(seq)
    assert is_sidon(seq, n00) and not any(is_sidon(seq, N) for N in range(2, n00))
    assert n00 <= n_zero(seq)


def test_admissible_triples_count():
    assert len(admissible_triples((0, 1, 3))) == 12


def test_collisions_mod_8():
    pairs = alternating_collisions((0, 1, 3), 8)
    assert len(pairs) == 9
    assert CollisionPair(7, (0, 1, 0), (1, 3, 1)) in pairs
    assert [p for p in pairs if p.residue == 7] == [CollisionPair(7, (0, 1, 0), (1, 3, 1))]


def test_collisions_mod_7():
    pairs = alternating_collisions((0, 1, 3), 7)
    assert len(pairs) == 12
    by_residue = {}
    for p in pairs:
        by_residue.setdefault(p.residue, set()).update([p.first, p.second])
    assert {r: len(ts) for r, ts in by_residue.items()} == {2: 3, 4: 3, 5: 3, 6: 3}


def test_collisions_of_0_1_mod_3():
    # only (0,1,0) and (1,0,1) are admissible, and both sum to 2 mod 3
    assert collision_pair_count((0, 1), 3) == 1
    assert alternating_collisions((0, 1), 3) == [CollisionPair(2, (0, 1, 0), (1, 0, 1))]


def test_collisions_need_sidon_mod():
    with pytest.raises(NotSidonError):
        alternating_collisions((0, 1, 3), 6)


@settings(max_examples=60)
@given(st.lists(st.integers(0, 25), min_size=2, max_size=5, unique=True).map(sorted).filter(is_sidon), st.integers(0, 40))
def test_collisions_match_bucket_oracle(seq, extra):
    N = 2 * seq[-1] + 1 + extra
    pairs = alternating_collisions(seq, N)
    assert len(pairs) == collision_pair_count(seq, N)
    buckets = collision_buckets(seq, N)
    for p in pairs:
        assert p.first < p.second
        assert p.first in buckets[p.residue] and p.second in buckets[p.residue]
        assert p.first[0] != p.second[0] and p.first[2] != p.second[2]
    assert pairs == sorted(pairs)


def test_collision_pair_json_roundtrip():
    p = CollisionPair(7, (0, 1, 0), (1, 3, 1))
    assert CollisionPair.from_json(p.to_json()) == p
