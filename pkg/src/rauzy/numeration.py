"""Integer numeration on the sequence T_n and its admissible digit language.

Digit words are stored ascending by index (``digits[i]`` is the digit of
T_{start+i}).  Lexicographic comparisons always read descending, most
significant digit first.  Zero is the empty word.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .ring import Params


class InadmissibleWord(ValueError):
    pass


def pattern_letter(i: int, params: Params) -> int:
    """Letter i of (a-1)(a+b-1)(a+b)(a+b)..."""
    if i == 0:
        return params.a - 1
    if i == 1:
        return params.a + params.b - 1
    return params.a + params.b


@dataclass(frozen=True)
class DigitWord:
    digits: tuple[int, ...] = ()
    start: int = 0

    def descending(self) -> list[int]:
        return list(reversed(self.digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        return " ".join(map(str, self.descending()))


@dataclass(frozen=True)
class TSequence:
    params: Params
    values: tuple[int, ...] = field(default=())


def t_sequence(params: Params, N: int) -> TSequence:
    if N < 0:
        raise ValueError("N must be >= 0")
    a, b = params.a, params.b
    t = [1, a, a * a + b]
    while len(t) < N + 1:
        t.append(a * t[-1] + b * t[-2] + t[-3])
    return TSequence(params, tuple(t[: N + 1]))


def _t_upto(params: Params, n: int) -> list[int]:
    """T_0..T_k with T_k the last term <= n (at least [1])."""
    a, b = params.a, params.b
    t = [1, a, a * a + b]
    while t[-1] <= n:
        t.append(a * t[-1] + b * t[-2] + t[-3])
    while len(t) > 1 and t[-1] > n:
        t.pop()
    return t


def greedy_expand(n: int, params: Params) -> DigitWord:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return DigitWord(())
    t = _t_upto(params, n)
    digits = [0] * len(t)
    rem = n
    for k in range(len(t) - 1, -1, -1):
        digits[k], rem = divmod(rem, t[k])
    assert rem == 0
    return DigitWord(tuple(digits))


def is_admissible(digits: Sequence[int], params: Params, descending: bool = True) -> bool:
    """Every descending window is <=_lex the pattern (a-1)(a+b-1)(a+b)^inf.

    ``digits`` is read most significant first unless ``descending=False``.
    """
    d = list(digits) if descending else list(reversed(digits))
    a = params.a
    if any(not (0 <= x <= a - 1) for x in d):
        return False
    for j in range(len(d)):
        for i, x in enumerate(d[j:]):
            pl = pattern_letter(i, params)
            if x < pl:
                break
            if x > pl:
                return False
    return True


def is_admissible_strict(digits: Sequence[int], params: Params) -> bool:
    """Strict variant: window <_lex (a-1)(a+b-1)(a+b)...(a+b)(a+b+1).

    Windows are compared against the pattern of the same length whose last
    letter is replaced by a+b+1 (only for windows of length >= 3).
    """
    d = list(digits)
    a, b = params.a, params.b
    if any(not (0 <= x <= a - 1) for x in d):
        return False
    for j in range(len(d)):
        for k in range(j, len(d)):
            w = d[j : k + 1]
            m = len(w)
            pat = [pattern_letter(i, params) for i in range(m)]
            if m >= 3:
                pat[-1] = a + b + 1
                if not w < pat:
                    return False
            elif w > pat:
                return False
    return True


def word_value(w: DigitWord, params: Params) -> int:
    if not is_admissible(w.descending(), params):
        raise InadmissibleWord(str(w))
    if not w.digits:
        return 0
    t = t_sequence(params, w.start + len(w.digits) - 1).values
    return sum(d * t[w.start + i] for i, d in enumerate(w.digits))


def lemma22_check(params: Params, n: int) -> bool:
    """T_n = (a-1)T_{n-1} + (a+b-1)T_{n-2} + (a+b)(T_{n-3}+...+T_1) + (a+b+1)T_0."""
    if n < 4:
        raise ValueError("identity is stated for n >= 4")
    a, b = params.a, params.b
    t = t_sequence(params, n).values
    rhs = (a - 1) * t[n - 1] + (a + b - 1) * t[n - 2] + (a + b) * sum(t[1 : n - 2]) + (a + b + 1) * t[0]
    return t[n] == rhs


# ------------------------------------------------------------ streaming DFA

REJECT = -1


class AdmissibilityDFA:
    """Acceptor for ascending-index digit streams.

    Rejects exactly the words containing, in ascending order, a factor
    (y, a-1) with y >= a+b, or (y, (a+b)^m, a+b-1, a-1) with y >= a+b+1.

    States: 0 neutral, 1 last digit a+b (not armed), 2 armed (last digit
    >= a+b+1 possibly followed by a run of a+b), 3 armed then a+b-1.
    """

    NEUTRAL, EQ, ARMED, PENDING = 0, 1, 2, 3
    states = (0, 1, 2, 3)
    initial = 0

    def __init__(self, params: Params):
        self.params = params
        a = params.a
        self._table = {
            (s, d): self._step(s, d) for s in self.states for d in range(a)
        }

    def _step(self, s: int, d: int) -> int:
        a, b = self.params.a, self.params.b
        top, ab = a - 1, a + b
        if d == top and s in (self.EQ, self.ARMED, self.PENDING):
            return REJECT
        if d >= ab + 1:
            return self.ARMED
        if d == ab:
            return self.ARMED if s == self.ARMED else self.EQ
        if d == ab - 1 and s == self.ARMED:
            return self.PENDING
        return self.NEUTRAL

    def step(self, s: int, d: int) -> int:
        if s == REJECT:
            return REJECT
        return self._table.get((s, d), REJECT)

    def run(self, ascending: Sequence[int]) -> int:
        s = self.initial
        for d in ascending:
            s = self.step(s, d)
            if s == REJECT:
                break
        return s

    def accepts(self, ascending: Sequence[int]) -> bool:
        return self.run(ascending) != REJECT


def admissibility_dfa(params: Params) -> AdmissibilityDFA:
    return AdmissibilityDFA(params)


def admissible_words(params: Params, length: int) -> Iterator[tuple[int, ...]]:
    """All admissible words of exactly ``length`` digits, ascending order."""
    dfa = AdmissibilityDFA(params)
    a = params.a

    def walk(prefix: list[int], s: int):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for d in range(a):
            t = dfa.step(s, d)
            if t != REJECT:
                prefix.append(d)
                yield from walk(prefix, t)
                prefix.pop()

    yield from walk([], dfa.initial)
