"""Explicit infinite IFS for the boundary of R_{3,-2}.

Everything here is specific to (a, b) = (3, -2).  The boundary of R is the
union of the six curves R_u = R cap (R + u), u in {+-alpha, +-(1-alpha),
+-(1-2alpha)}.  The curve R_{1-2alpha} is the attractor of the two families
f and g below; R_{1-alpha} and R_alpha are pieces of it rescaled.

Maps are z -> t + alpha^k z with t in Z[alpha].  Exact application works on
RingElem, numeric application on complex numbers.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .fractal import directed_hausdorff
from .ring import (
    ONE,
    ZERO,
    Params,
    RingElem,
    RootData,
    alpha_pow,
    field_inverse,
    mul,
    plane_point,
    solve_roots,
)

P32 = Params(3, -2)


class AdjacencyFailed(ArithmeticError):
    pass


def _A(k: int) -> RingElem:
    return alpha_pow(k, P32)


def lin(*terms: tuple[int, int]) -> RingElem:
    """sum c * alpha^k over (c, k) pairs."""
    v = ZERO
    for c, k in terms:
        v = v + _A(k).scale(c)
    return v


@lru_cache(maxsize=1)
def roots32() -> RootData:
    return solve_roots(P32)


@dataclass(frozen=True)
class AffineMap:
    translation: RingElem
    power: int
    tag: str
    index: tuple

    def __post_init__(self):
        if self.power < 1:
            raise ValueError("scale power must be positive")

    @property
    def name(self) -> str:
        return f"{self.tag}{'_'.join(map(str, self.index))}"

    def apply(self, z: RingElem) -> RingElem:
        return (self.translation + mul(_A(self.power), z, P32)).normalized()

    def coeffs(self, roots: RootData | None = None) -> tuple[complex, complex]:
        """(c, s) with the numeric map z -> c + s z."""
        roots = roots or roots32()
        return plane_point(self.translation, roots), complex(roots.alpha) ** self.power

    def __call__(self, z):
        c, s = self.coeffs()
        return c + s * np.asarray(z)

    def ratio(self, roots: RootData | None = None) -> float:
        return abs(self.coeffs(roots)[1])

    def fixed_point(self) -> RingElem:
        return mul(self.translation, field_inverse(ONE - _A(self.power), P32), P32).normalized()


# ------------------------------------------------------------ families

def _f_translation(i: int) -> tuple[RingElem, int]:
    if i == 0:
        return lin((3, 4), (-1, 5)), 3
    if i == 1:
        return lin((-1, 2), (2, 3)), 2
    if i == 2:
        return lin((-1, 3), (4, 4), (-1, 5)), 3
    if i == 3:
        return lin((1, 4), (3, 5), (-1, 6)), 4
    if i == 4:
        return lin((2, 4), (3, 6), (-1, 7)), 5
    k = i - 3
    mid = [(1, 4 + j) for j in range(1, k)]
    return lin((2, 4), *mid, (3, 5 + k), (-1, 6 + k)), 4 + k


def _g_translation(i: int) -> tuple[RingElem, int]:
    if i == 0:
        return lin((-1, 3), (3, 4), (-1, 5)), 3
    if i == 1:
        return lin((1, 4), (2, 5), (-1, 6)), 4
    if i == 2:
        return lin((2, 4), (2, 6), (-1, 7)), 5
    k = i - 1
    mid = [(1, 4 + j) for j in range(1, k)]
    return lin((2, 4), *mid, (2, 5 + k), (-1, 6 + k)), 4 + k


def f_map(i: int) -> AffineMap:
    if i < 0:
        raise ValueError("index must be >= 0")
    t, k = _f_translation(i)
    return AffineMap(t, k, "f", (i,))


def g_map(i: int) -> AffineMap:
    if i < 0:
        raise ValueError("index must be >= 0")
    t, k = _g_translation(i)
    return AffineMap(t, k, "g", (i,))


def f_family(kmax: int) -> list[AffineMap]:
    """f_0 .. f_4 and f_{3+k} for 2 <= k <= kmax."""
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    return [f_map(i) for i in range(0, 4 + kmax)]


def g_family(kmax: int) -> list[AffineMap]:
    """g_0 .. g_2 and g_{1+k} for 2 <= k <= kmax."""
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    return [g_map(i) for i in range(0, 2 + kmax)]


def cover_family(kmax: int) -> list[AffineMap]:
    """The parametrized listing f_0, f_{1,i,j}, f_{2,i,j}, f_{3,i,j}, f_{2+k,i}."""
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    out = [AffineMap(lin((-1, 2), (2, 3)), 2, "cover", (0,))]
    for i, j in ((1, 0), (0, 0), (0, 1)):
        out.append(AffineMap(lin((i - 1, 3), (j + 3, 4), (-1, 5)), 3, "cover", (1, i, j)))
    for i in (0, 1):
        for j in (0, 1):
            out.append(AffineMap(lin((i, 3), (1, 4), (j + 2, 5), (-2, 6)), 4, "cover", (2, i, j)))
    for i in (0, 1):
        for j in (0, 1):
            out.append(AffineMap(lin((i, 3), (2, 4), (j + 2, 6), (-2, 7)), 5, "cover", (3, i, j)))
    for k in range(2, kmax + 1):
        mid = [(1, 4 + j) for j in range(1, k)]
        for i in (0, 1):
            t = lin((2, 4), *mid, (i + 2, 5 + k), (-1, 6 + k))
            out.append(AffineMap(t, 4 + k, "cover", (2 + k, i)))
    return out


def neighbor_decomposition(which: str, kmax: int) -> list[AffineMap]:
    """Maps carrying R_{1-2alpha} into R_{1-alpha} or R_alpha.

    1-alpha: z -> l alpha^(k+1) + alpha^k z, l in {0,1,2}, 1 <= k <= kmax.
    alpha: z -> alpha z together with alpha times the previous maps.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if which not in ("1-alpha", "alpha"):
        raise ValueError("which must be '1-alpha' or 'alpha'")
    shift = 0 if which == "1-alpha" else 1
    out = []
    if which == "alpha":
        out.append(AffineMap(ZERO, 1, "neighborDecomp", (0, 0)))
    for k in range(1, kmax + 1):
        for l in (0, 1, 2):
            out.append(AffineMap(_A(k + 1 + shift).scale(l), k + shift, "neighborDecomp", (k, l)))
    return out


# ------------------------------------------------------- special points

_INV6 = None


def _inv6() -> RingElem:
    global _INV6
    if _INV6 is None:
        _INV6 = field_inverse(ONE - _A(6), P32)
    return _INV6


def z0() -> RingElem:
    """(alpha^3 + alpha^4 + alpha^5) / (1 - alpha^6)."""
    return mul(lin((1, 3), (1, 4), (1, 5)), _inv6(), P32).normalized()


def y0() -> RingElem:
    """(alpha^4 + alpha^5 + alpha^6) / (1 - alpha^6)."""
    return mul(lin((1, 4), (1, 5), (1, 6)), _inv6(), P32).normalized()


def chain_limit() -> RingElem:
    """Common limit of f_i(y0) and g_i(z0): 2 alpha^4 + alpha^5 / (1 - alpha)."""
    return (lin((2, 4)) + mul(_A(5), field_inverse(ONE - _A(1), P32), P32)).normalized()


U_ALPHA = RingElem(0, 1, 0)
U_1MA = RingElem(1, -1, 0)
U_1M2A = RingElem(1, -2, 0)


@dataclass(frozen=True)
class TriplePoint:
    index: int
    value: RingElem
    translates: tuple[RingElem, RingElem, RingElem]  # tiles R + u containing the point


def triple_points() -> list[TriplePoint]:
    """The six points lying in three tiles around R."""
    a, z, y = U_ALPHA, z0(), y0()
    one = ONE
    vals = [
        (a + z, (ZERO, a, U_1MA)),
        (y, (ZERO, U_1MA, U_1M2A)),
        (z, (ZERO, U_1M2A, -a)),
        (-one + a + y, (ZERO, -a, -U_1MA)),
        (-one + a.scale(2) + z, (ZERO, -U_1MA, -U_1M2A)),
        (-one + a.scale(2) + y, (ZERO, -U_1M2A, a)),
    ]
    return [TriplePoint(i + 1, v.normalized(), t) for i, (v, t) in enumerate(vals)]


def triple_point_shifts() -> list[bool]:
    """The relations T3 = T1 - alpha, T4 = T2 - 1 + alpha, T5 = T1 - 1 + alpha, T6 = T2 - 1 + 2 alpha."""
    T = {p.index: p.value for p in triple_points()}
    a = U_ALPHA
    rel = [
        (3, 1, -a),
        (4, 2, -ONE + a),
        (5, 1, -ONE + a),
        (6, 2, -ONE + a.scale(2)),
    ]
    return [(T[i] - T[j] - s).normalized().is_zero() for i, j, s in rel]


# ------------------------------------------------------------ adjacency

@dataclass
class AdjacencyReport:
    kmax: int
    exact: list[tuple[str, bool]]
    separations: list[dict]
    eps: float

    @property
    def exact_ok(self) -> bool:
        return all(ok for _, ok in self.exact)

    @property
    def inconclusive(self) -> list[dict]:
        return [s for s in self.separations if s["verdict"] == "inconclusive"]

    def to_dict(self) -> dict:
        return {
            "kmax": self.kmax,
            "eps": self.eps,
            "exact": [{"name": n, "pass": ok} for n, ok in self.exact],
            "separations": self.separations,
        }


def exact_adjacencies(kmax: int) -> list[tuple[str, bool]]:
    z, y = z0(), y0()
    out = [
        ("f0(y0)=z0", f_map(0).apply(y) == z),
        ("g0(z0)=y0", g_map(0).apply(z) == y),
    ]
    for i in range(0, 4 + kmax):
        out.append((f"f{i}(z0)=f{i + 1}(y0)", f_map(i).apply(z) == f_map(i + 1).apply(y)))
    for i in range(0, 2 + kmax):
        out.append((f"g{i}(y0)=g{i + 1}(z0)", g_map(i).apply(y) == g_map(i + 1).apply(z)))
    return out


def adjacency_check(kmax: int, samples: np.ndarray | None = None, eps: float | None = None) -> AdjacencyReport:
    """Exact endpoint identities and sampled separation of non-adjacent images.

    ``samples`` are points of R_{1-2alpha}; separation pairs are f_i vs f_l and
    g_i vs g_l with |i - l| > 1 and every f_i vs g_l, for indices up to 4.
    """
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    exact = exact_adjacencies(kmax)
    bad = [n for n, ok in exact if not ok]
    if bad:
        raise AdjacencyFailed(", ".join(bad))
    if samples is None:
        samples = curve_samples()
    if eps is None:
        eps = raster_eps(samples)
    from scipy.spatial import cKDTree

    fs = [f_map(i) for i in range(5)]
    gs = [g_map(i) for i in range(5)]
    imgs = {m.name: m(samples) for m in fs + gs}
    pairs = []
    for i in range(5):
        for l in range(i + 2, 5):
            pairs.append((fs[i].name, fs[l].name))
            pairs.append((gs[i].name, gs[l].name))
        for l in range(5):
            pairs.append((fs[i].name, gs[l].name))
    seps = []
    for p, q in pairs:
        A, B = imgs[p], imgs[q]
        d, _ = cKDTree(np.column_stack([B.real, B.imag])).query(np.column_stack([A.real, A.imag]))
        m = float(d.min())
        seps.append({"pair": [p, q], "distance": m, "verdict": "separated" if m >= 2 * eps else "inconclusive"})
    return AdjacencyReport(kmax, exact, seps, eps)


# ------------------------------------------------------------- samples

def curve_samples(u: RingElem = U_1M2A, depth: int = 16) -> np.ndarray:
    """Automaton-derived samples of R_u for (3,-2)."""
    from .boundary import boundary_points

    return boundary_points(P32, u, depth, roots32())


def bbox_side(points: np.ndarray) -> float:
    return float(max(np.ptp(points.real), np.ptp(points.imag)))


def raster_eps(points: np.ndarray, resolution: int = 512) -> float:
    """One pixel when the bounding box of ``points`` is drawn at resolution^2."""
    return bbox_side(points) / resolution


def curve_diameter(points: np.ndarray) -> float:
    from scipy.spatial import ConvexHull

    xy = np.column_stack([points.real, points.imag])
    hull = xy[ConvexHull(xy).vertices]
    d = hull[:, None, :] - hull[None, :, :]
    return float(np.sqrt((d ** 2).sum(-1)).max())


def truncated_family(eps: float, diam: float, which: str = "fg") -> list[AffineMap]:
    """f and/or g maps whose image diameter is at least eps."""
    out = []
    for tag, make in (("f", f_map), ("g", g_map)):
        if tag not in which:
            continue
        i = 0
        while True:
            m = make(i)
            if i > 4 and m.ratio() * diam < eps:
                break
            out.append(m)
            i += 1
    return out


def _truncate(maps: Sequence[AffineMap], eps: float, diam: float) -> list[AffineMap]:
    return [m for m in maps if m.ratio() * diam >= eps]


def attractor(
    maps: Sequence[AffineMap],
    depth: int,
    seed: complex | Iterable[complex],
    eps: float = 0.0,
    diam: float = 1.0,
) -> np.ndarray:
    """Images of seed under all compositions of length <= depth.

    Maps whose image diameter (ratio * diam) falls below eps are dropped;
    compositions stop refining once their scale times diam is below eps.
    """
    if not maps:
        raise ValueError("need at least one map")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    maps = _truncate(maps, eps, diam) if eps > 0 else list(maps)
    cs = np.array([m.coeffs()[0] for m in maps])
    ss = np.array([m.coeffs()[1] for m in maps])
    seeds = np.atleast_1d(np.asarray(seed, dtype=complex))
    # composition h = c + s z, starting from the identity
    hc, hs = np.zeros(1, dtype=complex), np.ones(1, dtype=complex)
    out = [seeds[None, :] * hs[:, None] + hc[:, None]]
    for _ in range(depth):
        live = np.abs(hs) * diam >= eps
        hc, hs = hc[live], hs[live]
        if len(hc) == 0:
            break
        # h o m: z -> hc + hs (c + s z)
        hc = (hc[:, None] + hs[:, None] * cs[None, :]).ravel()
        hs = (hs[:, None] * ss[None, :]).ravel()
        out.append(seeds[None, :] * hs[:, None] + hc[:, None])
    return np.unique(np.concatenate([o.ravel() for o in out]))


# ---------------------------------------------------- parametrization

@dataclass
class PolygonalApprox:
    level: int
    t: np.ndarray
    vertices: np.ndarray

    def __len__(self) -> int:
        return len(self.vertices)

    def at(self, t: np.ndarray) -> np.ndarray:
        return np.interp(t, self.t, self.vertices.real) + 1j * np.interp(t, self.t, self.vertices.imag)


def sup_distance(p: PolygonalApprox, q: PolygonalApprox) -> float:
    """Sup over [0,1] of |p(t) - q(t)|, attained at a breakpoint of either."""
    ts = np.union1d(p.t, q.t)
    return float(np.abs(p.at(ts) - q.at(ts)).max())


def parametrize_phi(n: int, eps: float | None = None, diam: float | None = None, nmax: int | None = None) -> PolygonalApprox:
    """Polygonal approximation phi_n of R_{1-2alpha}, from z0 to y0.

    phi_0 is the chord [z0, y0].  phi_{n+1} is, on equal parameter
    intervals, f_0(rev phi_n), ..., f_N(rev phi_n), the segments
    f_N(z0) -> c* -> g_N(y0), then g_N(rev phi_n), ..., g_0(rev phi_n), where
    c* is the common limit of both chains.  A composed piece whose
    scale times diam falls below eps is left as its chord.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    R = roots32()
    zz, yy, cc = (plane_point(x, R) for x in (z0(), y0(), chain_limit()))
    if diam is None:
        diam = 0.5
    if eps is None:
        eps = 1e-4 * diam
    if nmax is None:
        nmax = 4
        while abs(complex(R.alpha)) ** (4 + nmax) * diam >= eps:
            nmax += 1
    fs = [f_map(i).coeffs() for i in range(4 + nmax)]
    gs = [g_map(i).coeffs() for i in range(2 + nmax)]
    nf, ng = len(fs), len(gs)
    slots = nf + 2 + ng
    # children of one piece, in slot order: f maps, two centre segments, g maps reversed
    kc = np.array([c for c, _ in fs] + [0, 0] + [c for c, _ in reversed(gs)], dtype=complex)
    ks = np.array([s for _, s in fs] + [0, 0] + [s for _, s in reversed(gs)], dtype=complex)
    is_seg = np.zeros(slots, dtype=bool)
    is_seg[nf : nf + 2] = True
    fN = fs[-1][0] + fs[-1][1] * zz
    gN = gs[-1][0] + gs[-1][1] * yy
    seg_p = np.zeros(slots, dtype=complex)
    seg_q = np.zeros(slots, dtype=complex)
    seg_p[nf], seg_q[nf] = fN, cc
    seg_p[nf + 1], seg_q[nf + 1] = cc, gN

    # a piece is h(phi_k) on [t0, t0 + w], read backwards when rev; h = hc + hs z
    hc = np.zeros(1, dtype=complex)
    hs = np.ones(1, dtype=complex)
    rev = np.zeros(1, dtype=bool)
    t0 = np.zeros(1)
    w = np.ones(1)
    done_t, done_p, done_q = [], [], []
    for _ in range(n):
        live = np.abs(hs) * diam >= eps
        done_t.append(t0[~live])
        p0, q0 = hc[~live] + hs[~live] * zz, hc[~live] + hs[~live] * yy
        r0 = rev[~live]
        done_p.append(np.where(r0, q0, p0))
        done_q.append(np.where(r0, p0, q0))
        hc, hs, rev, t0, w = hc[live], hs[live], rev[live], t0[live], w[live]
        cw = w / slots
        pos = np.where(rev[:, None], slots - 1 - np.arange(slots)[None, :], np.arange(slots)[None, :])
        ct0 = t0[:, None] + pos * cw[:, None]
        # centre segments become finished leaves
        sp = hc[:, None] + hs[:, None] * seg_p[None, is_seg]
        sq = hc[:, None] + hs[:, None] * seg_q[None, is_seg]
        rr = rev[:, None]
        done_t.append(ct0[:, is_seg].ravel())
        done_p.append(np.where(rr, sq, sp).ravel())
        done_q.append(np.where(rr, sp, sq).ravel())
        m = ~is_seg
        hc, hs = (hc[:, None] + hs[:, None] * kc[None, m]).ravel(), (hs[:, None] * ks[None, m]).ravel()
        rev = np.repeat(~rev, m.sum())
        t0 = ct0[:, m].ravel()
        w = np.repeat(cw, m.sum())
    p0, q0 = hc + hs * zz, hc + hs * yy
    done_t.append(t0)
    done_p.append(np.where(rev, q0, p0))
    done_q.append(np.where(rev, p0, q0))
    T = np.concatenate(done_t)
    Pv = np.concatenate(done_p)
    order = np.argsort(T, kind="stable")
    last = np.concatenate(done_q)[order[-1]]
    return PolygonalApprox(n, np.append(T[order], 1.0), np.append(Pv[order], last))
