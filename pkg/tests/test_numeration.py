from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rauzy.numeration import (
    REJECT,
    AdmissibilityDFA,
    DigitWord,
    InadmissibleWord,
    admissible_words,
    greedy_expand,
    is_admissible,
    is_admissible_strict,
    lemma22_check,
    pattern_letter,
    t_sequence,
    word_value,
)
from rauzy.ring import Params, valid_params

P32 = Params(3, -2)


def t_matrix(p: Params, n: int) -> list[int]:
    """Oracle: T_0..T_n from powers of the companion matrix (object ints)."""
    M = np.array([[p.a, p.b, 1], [1, 0, 0], [0, 1, 0]], dtype=object)
    # state (T_{k+2}, T_{k+1}, T_k)
    v = np.array([p.a * p.a + p.b, p.a, 1], dtype=object)
    out = [1, p.a, p.a * p.a + p.b]
    for _ in range(n):
        v = M.dot(v)
        out.append(int(v[0]))
    return out[: n + 1]


def windows_ok(desc: list[int], p: Params) -> bool:
    """Oracle: literal window comparison against a materialized pattern."""
    pat = [p.a - 1, p.a + p.b - 1] + [p.a + p.b] * len(desc)
    for j in range(len(desc)):
        w = desc[j:]
        if w > pat[: len(w)]:
            return False
    return all(0 <= d < p.a for d in desc)


def test_t_sequence_examples():
    assert t_sequence(P32, 5).values == (1, 3, 7, 16, 37, 86)
    assert t_sequence(Params(6, -5), 2).values == (1, 6, 31)
    for p in valid_params(10):
        assert t_sequence(p, 0).values == (1,)


@pytest.mark.parametrize("p", valid_params(10), ids=str)
def test_t_sequence_matches_matrix_power_and_increases(p):
    t = t_sequence(p, 40).values
    assert list(t) == t_matrix(p, 40)
    assert all(x < y for x, y in zip(t, t[1:]))


def test_t_sequence_rejects_negative():
    with pytest.raises(ValueError):
        t_sequence(P32, -1)


def test_greedy_examples():
    assert greedy_expand(0, P32).digits == ()
    assert greedy_expand(10, P32).descending() == [1, 1, 0]
    assert str(greedy_expand(15, P32)) == "2 0 1"
    assert word_value(DigitWord((0, 1, 1)), P32) == 10
    assert word_value(DigitWord(()), P32) == 0
    assert word_value(DigitWord((0, 0, 0, 1)), P32) == 16
    with pytest.raises(ValueError):
        greedy_expand(-1, P32)


def test_word_value_rejects_inadmissible():
    with pytest.raises(InadmissibleWord):
        word_value(DigitWord((2, 0, 2)), P32)


@pytest.mark.parametrize("p", [Params(3, -2), Params(4, -3), Params(6, -5), Params(8, -7)], ids=str)
@given(n=st.integers(0, 10**12))
def test_round_trip_large(p, n):
    w = greedy_expand(n, p)
    assert word_value(w, p) == n
    assert is_admissible(w.descending(), p)


def _all_words_by_value(p: Params, limit: int) -> dict[int, list[tuple[int, ...]]]:
    t = t_sequence(p, 12).values
    L = next(i for i, x in enumerate(t) if x > limit) + 1
    by_value: dict[int, list] = {}
    for desc in itertools.product(range(p.a), repeat=L):
        if not windows_ok(list(desc), p):
            continue
        v = sum(d * t[L - 1 - i] for i, d in enumerate(desc))
        if v <= limit:
            by_value.setdefault(v, []).append(desc)
    return by_value


@pytest.mark.parametrize("p", [Params(3, -2), Params(4, -3)], ids=str)
def test_uniqueness_small(p):
    by_value = _all_words_by_value(p, 200)
    for n in range(201):
        assert len(by_value[n]) == 1, n
        desc = list(by_value[n][0])
        greedy = greedy_expand(n, p).descending()
        assert desc[len(desc) - len(greedy):] == greedy


def test_admissible_examples():
    assert is_admissible([2, 0, 1, 1], P32)
    assert not is_admissible([2, 0, 2], P32)
    assert is_admissible([0, 0, 0, 0], P32)
    assert is_admissible([], P32)
    assert not is_admissible([3], P32)
    assert not is_admissible([-1], P32)
    assert is_admissible([1, 2, 0], P32, descending=True)
    assert is_admissible([0, 2, 1], P32, descending=False)


def test_language_examples():
    # windows <= 2 0 1 1 ... 1 for (3,-2) and 5 0 1 ... 1 for (6,-5)
    assert [pattern_letter(i, P32) for i in range(5)] == [2, 0, 1, 1, 1]
    p65 = Params(6, -5)
    assert [pattern_letter(i, p65) for i in range(5)] == [5, 0, 1, 1, 1]
    assert is_admissible([5, 0, 1, 1, 1, 1], p65)
    assert not is_admissible([5, 0, 1, 1, 2], p65)


@pytest.mark.parametrize("a,length", [(3, 10), (4, 8), (5, 6)])
def test_dfa_exhaustive(a, length):
    for b in range(-a + 1, -1):
        p = Params(a, b)
        dfa = AdmissibilityDFA(p)
        for n in range(length + 1):
            for asc in itertools.product(range(a), repeat=n):
                desc = list(reversed(asc))
                assert dfa.accepts(asc) == windows_ok(desc, p) == is_admissible(desc, p), (p, desc)


@pytest.mark.parametrize("p", [Params(a, b) for a in (6, 8, 9, 10) for b in (-a + 1, -a + 2, -2)], ids=str)
def test_dfa_random(p):
    rng = random.Random(p.a * 100 + p.b)
    dfa = AdmissibilityDFA(p)
    # bias digits toward the pattern letters so boundary cases are common
    hot = [p.a - 1, p.a + p.b - 1, p.a + p.b, p.a + p.b + 1, 0]
    hot = [h for h in hot if 0 <= h < p.a]
    for _ in range(4000):
        n = rng.randint(1, 12)
        asc = [rng.choice(hot) if rng.random() < 0.8 else rng.randrange(p.a) for _ in range(n)]
        assert dfa.accepts(asc) == windows_ok(list(reversed(asc)), p)


def test_dfa_examples():
    dfa = AdmissibilityDFA(P32)
    # ascending 1 then 2: descending window "2 1" exceeds "2 0"
    assert not dfa.accepts([1, 2])
    assert dfa.accepts([1] * 30)
    assert dfa.accepts([2])
    assert dfa.run([1, 2, 0]) == REJECT
    p = Params(7, -4)
    assert AdmissibilityDFA(p).accepts([p.a + p.b] * 20)


@pytest.mark.parametrize("p", valid_params(6), ids=str)
def test_strict_variant_equivalent(p):
    for n in range(1, 7 if p.a <= 4 else 5):
        for desc in itertools.product(range(p.a), repeat=n):
            assert is_admissible_strict(list(desc), p) == is_admissible(list(desc), p)


def test_admissible_words_count_matches_filter():
    got = set(admissible_words(P32, 6))
    want = {w for w in itertools.product(range(3), repeat=6) if windows_ok(list(reversed(w)), P32)}
    assert got == want


def test_lemma22_examples():
    assert lemma22_check(P32, 4)
    t = t_sequence(P32, 4).values
    assert t[4] == 37 == 2 * 16 + 0 * 7 + 1 * 3 + 2 * 1
    assert t_sequence(Params(6, -5), 3).values == (1, 6, 31, 157)
    assert lemma22_check(Params(6, -5), 4)
    with pytest.raises(ValueError):
        lemma22_check(P32, 3)
