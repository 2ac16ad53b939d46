"""Exact arithmetic in Z[alpha] and Q(alpha) for x^3 - a x^2 - b x - 1.

Elements are triples (n, p, q) standing for n + p*alpha + q*alpha^2.  The
coefficients are Python ints (arbitrary precision) or ``Fraction`` when an
inverse in the field is needed.  Numeric values are obtained with ``embed``
at one of the three roots returned by ``solve_roots``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Coeff = Union[int, Fraction]


class ParamsError(ValueError):
    """Raised for (a, b) outside the class -a+1 <= b <= -2."""


class ZeroInverse(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class Params:
    a: int
    b: int

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise ParamsError("a and b must be integers")
        if self.a < 3:
            raise ParamsError(f"a = {self.a}: no b satisfies −a+1 ≤ b ≤ −2 unless a >= 3")
        if not (-self.a + 1 <= self.b <= -2):
            raise ParamsError(
                f"(a, b) = ({self.a}, {self.b}) violates −a+1 ≤ b ≤ −2"
            )

    @property
    def K(self) -> int:
        """floor((a-1)/(a+b+1))."""
        return (self.a - 1) // (self.a + self.b + 1)

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b}


def valid_params(amax: int, amin: int = 3) -> list[Params]:
    """All admissible (a, b) with amin <= a <= amax."""
    return [Params(a, b) for a in range(amin, amax + 1) for b in range(-a + 1, -1)]


@dataclass(frozen=True, order=True)
class RingElem:
    """n + p*alpha + q*alpha^2."""

    n: Coeff = 0
    p: Coeff = 0
    q: Coeff = 0

    def __add__(self, other: "RingElem") -> "RingElem":
        if isinstance(other, int):
            return RingElem(self.n + other, self.p, self.q)
        return RingElem(self.n + other.n, self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other: "RingElem") -> "RingElem":
        return self + (-other)

    def __rsub__(self, other) -> "RingElem":
        return (-self) + other

    def __neg__(self) -> "RingElem":
        return RingElem(-self.n, -self.p, -self.q)

    def scale(self, c: Coeff) -> "RingElem":
        return RingElem(c * self.n, c * self.p, c * self.q)

    def coeffs(self) -> tuple:
        return (self.n, self.p, self.q)

    def is_zero(self) -> bool:
        return self.n == 0 and self.p == 0 and self.q == 0

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coeffs())

    def normalized(self) -> "RingElem":
        """Fractions with denominator 1 turned back into ints."""
        return RingElem(*(_norm(c) for c in self.coeffs()))

    def sort_key(self) -> tuple:
        # exports order states by (q, p, n)
        return (self.q, self.p, self.n)

    def to_dict(self) -> dict:
        return {k: _jsonable(v) for k, v in zip("npq", self.coeffs())}

    def label(self) -> str:
        """Human readable form such as ``1-2α+2α²``."""
        terms = []
        for c, mono in zip(self.coeffs(), ("", "α", "α²")):
            if c == 0:
                continue
            s = str(c)
            if mono:
                if c == 1:
                    s = ""
                elif c == -1:
                    s = "-"
            terms.append(s + mono)
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += t if t.startswith("-") else "+" + t
        return out

    def __repr__(self) -> str:
        return f"RingElem({self.n}, {self.p}, {self.q})"


def _norm(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def _jsonable(c: Coeff):
    c = _norm(c)
    return c if isinstance(c, int) else str(c)


ZERO = RingElem(0, 0, 0)
ONE = RingElem(1, 0, 0)
ALPHA = RingElem(0, 1, 0)
ALPHA2 = RingElem(0, 0, 1)


def reduce(coeffs: Sequence[Coeff], params: Params) -> RingElem:
    """Reduce sum(c_i alpha^i) with alpha^3 = a alpha^2 + b alpha + 1."""
    c = list(coeffs) + [0] * max(0, 3 - len(coeffs))
    a, b = params.a, params.b
    for i in range(len(c) - 1, 2, -1):
        top = c[i]
        if top:
            c[i - 1] += a * top
            c[i - 2] += b * top
            c[i - 3] += top
        c[i] = 0
    return RingElem(c[0], c[1], c[2])


def add(x: RingElem, y: RingElem) -> RingElem:
    return x + y


def neg(x: RingElem) -> RingElem:
    return -x


def mul(x: RingElem, y: RingElem, params: Params) -> RingElem:
    xn, xp, xq = x.coeffs()
    yn, yp, yq = y.coeffs()
    prod = [
        xn * yn,
        xn * yp + xp * yn,
        xn * yq + xp * yp + xq * yn,
        xp * yq + xq * yp,
        xq * yq,
    ]
    return reduce(prod, params)


def alpha_pow(k: int, params: Params) -> RingElem:
    """alpha^k for any integer k (alpha is a unit)."""
    if k >= 0:
        return reduce([0] * k + [1], params)
    x = ONE
    for _ in range(-k):
        x = div_by_alpha(x, params)
    return x


def alpha_inverse(params: Params) -> RingElem:
    return RingElem(-params.b, -params.a, 1)


def div_by_alpha(x: RingElem, params: Params) -> RingElem:
    # alpha^-1 = alpha^2 - a*alpha - b, expanded: x/alpha = (p - b n) + (q - a n) alpha + n alpha^2
    n, p, q = x.coeffs()
    return RingElem(p - params.b * n, q - params.a * n, n)


def times_alpha(x: RingElem, params: Params) -> RingElem:
    n, p, q = x.coeffs()
    return RingElem(q, n + params.b * q, p + params.a * q)


def poly(coeffs: Iterable[Coeff], params: Params, shift: int = 0) -> RingElem:
    """sum(c_i alpha^(i+shift)); shift may be negative."""
    val = reduce(list(coeffs), params)
    if shift >= 0:
        for _ in range(shift):
            val = times_alpha(val, params)
    else:
        for _ in range(-shift):
            val = div_by_alpha(val, params)
    return val


def _solve3(m: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    aug = [row[:] + [r] for row, r in zip(m, rhs)]
    for col in range(3):
        piv = next((r for r in range(col, 3) if aug[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular multiplication matrix for nonzero element")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(3):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [vr - f * vc for vr, vc in zip(aug[r], aug[col])]
    return [aug[r][3] for r in range(3)]


def field_inverse(x: RingElem, params: Params) -> RingElem:
    """Exact inverse of x in Q(alpha)."""
    if x.is_zero():
        raise ZeroInverse("0 has no inverse")
    basis = [ONE, ALPHA, ALPHA2]
    cols = [mul(x, e, params) for e in basis]
    m = [[Fraction(cols[j].coeffs()[i]) for j in range(3)] for i in range(3)]
    sol = _solve3(m, [Fraction(1), Fraction(0), Fraction(0)])
    return RingElem(*sol).normalized()


def field_div(x: RingElem, y: RingElem, params: Params) -> RingElem:
    return mul(x, field_inverse(y, params), params).normalized()


# ---------------------------------------------------------------- roots

@dataclass(frozen=True)
class RootData:
    """Roots of x^3 - a x^2 - b x - 1.

    ``alpha`` is the complex root with positive imaginary part, or in the
    totally real case the smaller of the two real conjugates; ``lam`` is the
    other conjugate (complex conjugate of alpha, or the larger real one).
    """

    params: Params
    beta: float
    alpha: complex | float
    lam: complex | float
    case: str  # "complex" | "totally-real"

    @property
    def is_complex(self) -> bool:
        return self.case == "complex"

    @property
    def contracting(self) -> list:
        """One representative per distinct modulus among the conjugates."""
        if self.is_complex:
            return [self.alpha]
        return [self.alpha, self.lam]

    def root(self, which: str):
        return {"beta": self.beta, "alpha": self.alpha, "lambda": self.lam}[which]


def discriminant(params: Params) -> int:
    """Discriminant of x^3 - a x^2 - b x - 1."""
    B, C, D = -params.a, -params.b, -1
    return 18 * B * C * D - 4 * B**3 * D + B**2 * C**2 - 4 * C**3 - 27 * D**2


def _p(x, a, b):
    return ((x - a) * x - b) * x - 1


def _dp(x, a, b):
    return (3 * x - 2 * a) * x - b


def _newton(x, a, b, steps=8):
    for _ in range(steps):
        d = _dp(x, a, b)
        if d == 0:
            break
        step = _p(x, a, b) / d
        x = x - step
        if abs(step) < 1e-17 * max(1.0, abs(x)):
            break
    return x


def solve_roots(params: Params) -> RootData:
    a, b = params.a, params.b
    lo, hi = 1.0, float(a + 1)
    # P(1) = -(a+b) < 0 < P(a+1)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _p(mid, a, b) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * hi:
            break
    beta = _newton(0.5 * (lo + hi), a, b)
    # deflate: x^2 + (beta - a) x + 1/beta
    c1, c0 = beta - a, 1.0 / beta
    disc = discriminant(params)
    if disc < 0:
        r = (-c1 + cmath.sqrt(c1 * c1 - 4 * c0)) / 2
        alpha = _newton(complex(r.real, abs(r.imag)), a, b)
        return RootData(params, beta, alpha, alpha.conjugate(), "complex")
    sq = math.sqrt(max(c1 * c1 - 4 * c0, 0.0))
    r1, r2 = (-c1 - sq) / 2, (-c1 + sq) / 2
    r1, r2 = _newton(r1, a, b), _newton(r2, a, b)
    return RootData(params, beta, min(r1, r2), max(r1, r2), "totally-real")


def embed(x: RingElem, root: str, roots: RootData):
    r = roots.root(root)
    n, p, q = (float(c) for c in x.coeffs())
    return n + p * r + q * r * r


def embed_at(x: RingElem, r):
    n, p, q = (float(c) for c in x.coeffs())
    return n + p * r + q * r * r


def plane_point(x: RingElem, roots: RootData) -> complex:
    """Point of x in the contracting plane, encoded as a complex number.

    Totally real case: (value at alpha, value at lambda) -> x + iy.
    """
    if roots.is_complex:
        return complex(embed_at(x, roots.alpha))
    return complex(embed_at(x, roots.alpha), embed_at(x, roots.lam))
