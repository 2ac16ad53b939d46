"""Point clouds of R_{a,b}, exact psi-series, tiling patches and distances."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .numeration import REJECT, AdmissibilityDFA
from .ring import (
    ALPHA,
    ONE,
    ZERO,
    Params,
    RingElem,
    RootData,
    alpha_pow,
    field_inverse,
    mul,
    plane_point,
    poly,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    pass


class IdentityFailed(ArithmeticError):
    pass


class EmptySet(ValueError):
    pass


def budget() -> int:
    return int(os.environ.get("RAUZY_BUDGET", DEFAULT_BUDGET))


# ----------------------------------------------------------------- psi

@dataclass(frozen=True)
class PeriodicDigitString:
    """preperiod followed by period repeated forever, first digit at ``start``.

    Digits may be any integers: psi is evaluated as a formal series.
    """

    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()
    start: int = 0

    def digits(self, n: int) -> list[int]:
        out = list(self.preperiod)
        while len(out) < n and self.period:
            out.extend(self.period)
        return (out + [0] * n)[:n]


def psi_exact(s: PeriodicDigitString, params: Params) -> RingElem:
    """sum_i l_i alpha^(start+i) as an exact element of Q(alpha)."""
    val = poly(s.preperiod, params, shift=s.start)
    if s.period:
        block = poly(s.period, params, shift=s.start + len(s.preperiod))
        denom = ONE - alpha_pow(len(s.period), params)
        val = val + mul(block, field_inverse(denom, params), params)
    return val.normalized()


def psi_numeric(s: PeriodicDigitString, r, reps: int = 200) -> complex:
    """Truncated numeric sum at the root r (preperiod + reps periods)."""
    ds = list(s.preperiod) + list(s.period) * reps
    return sum(d * r ** (s.start + i) for i, d in enumerate(ds))


def lemma33_strings(params: Params) -> dict[str, PeriodicDigitString]:
    """The five strings of the triple-point identities.

    The repeating block is (b+2)(a+b)(a-2)000, i.e. period six, matching the
    closed forms over 1 - alpha^6.
    """
    a, b = params.a, params.b
    blk = (b + 2, a + b, a - 2, 0, 0, 0)
    return {
        "w1": PeriodicDigitString((0, 0, 0, 0), blk),
        "w2": PeriodicDigitString((0, 1, b, a - 1, 0, 0, 0), blk),
        "w3": PeriodicDigitString((1, b + 1, a + b, a - 2, 0, 0, 0), blk),
        "z1": PeriodicDigitString((1, b, a - 1)),
        "z2": PeriodicDigitString((0, 0, 0, b + 2, a + b + 1), (a + b,)),
    }


def verify_lemma33(params: Params) -> dict:
    vals = {k: psi_exact(s, params) for k, s in lemma33_strings(params).items()}
    for lhs, rhs in (("w1", "w2"), ("w1", "w3"), ("z1", "z2")):
        diff = (vals[lhs] - vals[rhs]).normalized()
        if not diff.is_zero():
            raise IdentityFailed(f"{lhs} - {rhs} = {diff!r} for {params}")
    # closed form of w1 written over 1 - alpha^6
    a, b = params.a, params.b
    closed = mul(
        poly([0, 0, 0, 0, b + 2, a + b, a - 2], params),
        field_inverse(ONE - alpha_pow(6, params), params),
        params,
    ).normalized()
    if closed != vals["w1"]:
        raise IdentityFailed(f"w1 closed form mismatch for {params}")
    return {"w": vals["w1"], "z": vals["z1"], "values": vals}


# --------------------------------------------------------------- clouds

@dataclass
class PointCloud:
    params: Params
    depth: int
    points: np.ndarray  # complex; totally real case stores (x, y) as x + iy
    words: np.ndarray | None = field(default=None, repr=False)  # rows: digits at 2..depth

    def __len__(self) -> int:
        return len(self.points)

    def shifted(self, z: complex) -> "PointCloud":
        return PointCloud(self.params, self.depth, self.points + z, self.words)

    def xy(self) -> np.ndarray:
        return np.column_stack([self.points.real, self.points.imag])


def plane_powers(roots: RootData, n: int) -> np.ndarray:
    """theta_i in the plane for i = 0..n, as complex numbers."""
    i = np.arange(n + 1)
    if roots.is_complex:
        return np.asarray(roots.alpha, dtype=complex) ** i
    return np.asarray(roots.alpha, dtype=float) ** i + 1j * np.asarray(roots.lam, dtype=float) ** i


def generate_points(
    params: Params,
    depth: int,
    roots: RootData,
    keep_words: bool = False,
    max_points: int | None = None,
) -> PointCloud:
    """One point per admissible word on indices 2..depth."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    cap = budget() if max_points is None else max_points
    if params.a ** depth > cap:
        log.warning("a^depth = %d exceeds the budget %d", params.a ** depth, cap)
    dfa = AdmissibilityDFA(params)
    table = np.full((len(dfa.states), params.a), REJECT, dtype=np.int64)
    for s in dfa.states:
        for d in range(params.a):
            table[s, d] = dfa.step(s, d)
    theta = plane_powers(roots, depth)
    pts = np.zeros(1, dtype=complex)
    st = np.array([dfa.initial], dtype=np.int64)
    words = np.zeros((1, 0), dtype=np.int8) if keep_words else None
    for i in range(2, depth + 1):
        new_pts, new_st, new_w = [], [], []
        for d in range(params.a):
            nxt = table[st, d]
            keep = nxt != REJECT
            new_pts.append(pts[keep] + d * theta[i])
            new_st.append(nxt[keep])
            if keep_words:
                new_w.append(np.hstack([words[keep], np.full((keep.sum(), 1), d, dtype=np.int8)]))
        pts = np.concatenate(new_pts)
        st = np.concatenate(new_st)
        if keep_words:
            words = np.vstack(new_w)
        if len(pts) > cap:
            raise BudgetExceeded(f"{len(pts)} words at index {i} exceed budget {cap}")
    return PointCloud(params, depth, pts, words)


def tail_bound(params: Params, roots: RootData, depth: int) -> float:
    """Max distance between a point of R and its truncation at ``depth``."""
    out = 0.0
    for r in roots.contracting:
        out = max(out, (params.a - 1) * abs(r) ** (depth + 1) / (1 - abs(r)))
    if not roots.is_complex:
        ra, rl = abs(roots.alpha), abs(roots.lam)
        out = (params.a - 1) * np.hypot(ra ** (depth + 1) / (1 - ra), rl ** (depth + 1) / (1 - rl))
    return float(out)


# ---------------------------------------------------------------- lattice

@dataclass(frozen=True)
class Lattice:
    """Z*g1 + Z*g2 in the contracting plane."""

    g1: RingElem
    g2: RingElem
    e1: complex
    e2: complex

    @classmethod
    def standard(cls, roots: RootData) -> "Lattice":
        return cls(ONE, ALPHA, plane_point(ONE, roots), plane_point(ALPHA, roots))

    @property
    def covolume(self) -> float:
        return abs((self.e1.conjugate() * self.e2).imag)

    def points_within(self, radius: float, center: complex = 0j) -> list[tuple[int, int, complex]]:
        m = np.array([[self.e1.real, self.e2.real], [self.e1.imag, self.e2.imag]])
        inv = np.linalg.inv(m)
        # bound on the integer coordinates from the operator norm of the inverse
        span = int(np.ceil(np.linalg.norm(inv, 2) * (radius + abs(center)))) + 1
        out = []
        for i in range(-span, span + 1):
            for j in range(-span, span + 1):
                z = i * self.e1 + j * self.e2
                if abs(z - center) <= radius:
                    out.append((i, j, z))
        return out


def tiling_patch(
    params: Params, roots: RootData, radius: float, depth: int = 14, cloud: PointCloud | None = None
) -> list[tuple[RingElem, PointCloud]]:
    """Translates R + u, u in Z + Z*alpha, with |u| <= radius."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    cloud = cloud if cloud is not None else generate_points(params, depth, roots)
    lat = Lattice.standard(roots)
    out = []
    for i, j, z in sorted(lat.points_within(radius), key=lambda t: (abs(t[2]), t[0], t[1])):
        out.append((RingElem(i, j, 0), cloud.shifted(z)))
    return out


def covering_check(
    params: Params,
    roots: RootData,
    depth: int = 14,
    samples: int = 10_000,
    resolution: int = 512,
    seed: int = 0,
) -> dict:
    """Sample a central disk and measure distance to the nearest translate.

    Also estimates overlap as sum of per-tile occupied pixels over the
    occupied pixels of the union, on a resolution^2 raster of the disk.
    """
    cloud = generate_points(params, depth, roots)
    center = complex(cloud.points.mean())
    radius = float(np.max(np.abs(cloud.points - center)))
    lat = Lattice.standard(roots)
    diam_r = float(np.max(np.abs(cloud.points - center))) * 2
    tiles = [
        (RingElem(i, j, 0), cloud.points + z)
        for i, j, z in lat.points_within(radius + diam_r, center)
    ]
    allpts = np.concatenate([p for _, p in tiles])
    tree = cKDTree(np.column_stack([allpts.real, allpts.imag]))
    rng = np.random.default_rng(seed)
    rr = radius * np.sqrt(rng.random(samples))
    th = 2 * np.pi * rng.random(samples)
    zs = center + rr * np.exp(1j * th)
    dist, _ = tree.query(np.column_stack([zs.real, zs.imag]))
    pixel = 2 * radius / resolution

    x0, y0 = center.real - radius, center.imag - radius
    union = set()
    total = 0
    for _, p in tiles:
        inside = np.abs(p - center) <= radius
        q = p[inside]
        ix = np.floor((q.real - x0) / pixel).astype(np.int64)
        iy = np.floor((q.imag - y0) / pixel).astype(np.int64)
        cells = set(zip(ix.tolist(), iy.tolist()))
        total += len(cells)
        union |= cells
    return {
        "radius": radius,
        "pixel": pixel,
        "tail": tail_bound(params, roots, depth),
        "max_distance": float(dist.max()),
        "covered": int((dist <= pixel).sum()),
        "samples": samples,
        "overlap": total / len(union) - 1.0,
        "tiles": len(tiles),
    }


# ------------------------------------------------------------ distances

def _as_xy(a) -> np.ndarray:
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return np.column_stack([a.real, a.imag])
    a = a.astype(float)
    return a if a.ndim == 2 else a.reshape(-1, 1)


def directed_hausdorff(a, b) -> float:
    """max over a of the distance to the nearest point of b."""
    A, B = _as_xy(a), _as_xy(b)
    if len(A) == 0 or len(B) == 0:
        raise EmptySet("Hausdorff distance of an empty set")
    d, _ = cKDTree(B).query(A)
    return float(d.max())


def hausdorff_distance(a, b) -> float:
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))
