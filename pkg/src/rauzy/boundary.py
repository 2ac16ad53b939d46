"""Difference automaton for pairs of expansions of the same point.

States are the scaled remainders S_k in Z[alpha].  Reading the digit pair
(c, d) at index k+1 moves S to S/alpha + (c - d) alpha^2.  A sequence of
pairs describes two expansions of the same point exactly when the path it
traces stays inside a finite set of states, so the automaton is built by a
breadth-first search that drops every successor whose contracting
embeddings leave the bound

    C_sigma = (a-1) |sigma(alpha)|^3 / (1 - |sigma(alpha)|).

Above that bound the modulus grows at every step (|S'| - |S| >=
|S|(1/r - 1) - (a-1) r^2 > 0 with r = |sigma(alpha)|), so no infinite path
passes through a pruned state and the pruning loses nothing.  The beta
embedding contracts under the same move, which bounds the search.

By default both digit streams are also run through the admissibility
acceptor (ascending index order), so product nodes are (S, sx, sy).  With
``strict=False`` the labels range over all of {0..a-1}^2 and the acceptor
components stay at 0.

Neighbour translates: for u in Z + Z alpha, R and R + u meet iff there are
digit sequences x, y (indices >= 2) with sum (x_i - y_i) alpha^i = -u.
Scaling the partial remainders by alpha^(-k+2) gives the same move with
initial state alpha*u at k = 1.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .numeration import REJECT, AdmissibilityDFA
from .ring import (
    ALPHA,
    ONE,
    ZERO,
    Params,
    RingElem,
    RootData,
    div_by_alpha,
    embed_at,
    plane_point,
    solve_roots,
    times_alpha,
)

SLACK = 1 + 1e-9

Node = tuple  # (RingElem, sx, sy)


class LatticeViolation(ValueError):
    pass


@dataclass
class DiffAutomaton:
    params: Params
    initial: list[Node]
    # node -> {successor node: [(c, d), ...]}
    graph: dict[Node, dict[Node, list[tuple[int, int]]]]
    strict: bool = True
    lemma45filter: bool = False

    @property
    def nodes(self) -> list[Node]:
        return list(self.graph)

    @property
    def states(self) -> list[RingElem]:
        """Distinct remainders, sorted by (q, p, n)."""
        return sorted({nd[0] for nd in self.graph}, key=lambda s: s.sort_key())

    def edges(self) -> list[tuple[RingElem, int, RingElem]]:
        """Projected edges (from, c-d, to), sorted."""
        out = set()
        for nd, succ in self.graph.items():
            for nt, labels in succ.items():
                for c, d in labels:
                    out.add((nd[0], c - d, nt[0]))
        return sorted(out, key=lambda e: (e[0].sort_key(), e[1], e[2].sort_key()))

    def labels(self) -> dict[tuple[RingElem, int, RingElem], set]:
        res: dict = {}
        for nd, succ in self.graph.items():
            for nt, labels in succ.items():
                for c, d in labels:
                    res.setdefault((nd[0], c - d, nt[0]), set()).add((c, d))
        return res

    def has(self, s: RingElem) -> bool:
        return any(nd[0] == s for nd in self.graph)

    def alive_starts(self) -> list[Node]:
        return [n for n in self.initial if n in self.graph]

    def to_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "strict": self.strict,
            "states": [s.to_dict() for s in self.states],
            "edges": [
                {"from": f.to_dict(), "to": t.to_dict(), "diff": k} for f, k, t in self.edges()
            ],
        }


class _Bounds:
    def __init__(self, params: Params, roots: RootData, lemma45filter: bool):
        a = params.a
        self.contracting = [
            (r, (a - 1) * abs(r) ** 3 / (1 - abs(r)) * SLACK) for r in roots.contracting
        ]
        self.beta = roots.beta
        self.beta3 = roots.beta**3 if lemma45filter else None

    def ok(self, s: RingElem) -> bool:
        for r, c in self.contracting:
            if abs(embed_at(s, r)) > c:
                return False
        if self.beta3 is not None and abs(embed_at(s, self.beta)) >= self.beta3:
            return False
        return True


def explore(
    params: Params,
    start: RingElem | Iterable[RingElem] = ZERO,
    lemma45filter: bool = False,
    strict: bool = True,
    roots: RootData | None = None,
) -> DiffAutomaton:
    """Breadth-first construction of every node reachable from ``start``."""
    roots = roots or solve_roots(params)
    starts = [start] if isinstance(start, RingElem) else list(start)
    bounds = _Bounds(params, roots, lemma45filter)
    dfa = AdmissibilityDFA(params)
    a = params.a
    graph: dict[Node, dict[Node, list]] = {}
    initial = [(s, dfa.initial, dfa.initial) for s in starts]
    queue = deque()
    for nd in initial:
        if nd not in graph and bounds.ok(nd[0]):
            graph[nd] = {}
            queue.append(nd)
    ok_cache: dict[RingElem, bool] = {}
    while queue:
        nd = queue.popleft()
        s, sx, sy = nd
        base = div_by_alpha(s, params)
        succ = graph[nd]
        for k in range(-(a - 1), a):
            t = RingElem(base.n, base.p, base.q + k)
            good = ok_cache.get(t)
            if good is None:
                good = ok_cache[t] = bounds.ok(t)
            if not good:
                continue
            for d in range(max(0, -k), min(a, a - k)):
                c = d + k
                if strict:
                    tx, ty = dfa.step(sx, c), dfa.step(sy, d)
                    if tx == REJECT or ty == REJECT:
                        continue
                else:
                    tx, ty = sx, sy
                nt = (t, tx, ty)
                succ.setdefault(nt, []).append((c, d))
                if nt not in graph:
                    graph[nt] = {}
                    queue.append(nt)
    return DiffAutomaton(params, initial, graph, strict, lemma45filter)


def trim(aut: DiffAutomaton) -> DiffAutomaton:
    """Keep the nodes from which an infinite path exists."""
    graph = aut.graph
    pred: dict[Node, set] = {n: set() for n in graph}
    outdeg = {}
    for n, succ in graph.items():
        live = [t for t in succ if t in graph]
        outdeg[n] = len(live)
        for t in live:
            pred[t].add(n)
    dead = deque(n for n, k in outdeg.items() if k == 0)
    removed = set()
    while dead:
        n = dead.popleft()
        if n in removed:
            continue
        removed.add(n)
        for p in pred[n]:
            if p in removed:
                continue
            outdeg[p] -= 1
            if outdeg[p] == 0:
                dead.append(p)
    kept = {
        n: {t: list(lbl) for t, lbl in succ.items() if t not in removed and t in graph}
        for n, succ in graph.items()
        if n not in removed
    }
    return DiffAutomaton(aut.params, aut.initial, kept, aut.strict, aut.lemma45filter)


def boundary_automaton(
    params: Params, strict: bool = True, lemma45filter: bool = False, roots: RootData | None = None
) -> DiffAutomaton:
    return trim(explore(params, ZERO, lemma45filter, strict, roots))


def expected_states(params: Params) -> set[RingElem]:
    """E_{a,b}, its negatives, and the extra states for 2 <= t <= K."""
    a, b = params.a, params.b
    base = [
        RingElem(0, 0, 1),
        RingElem(0, 1, b),
        RingElem(0, 1, b + 1),
        RingElem(1, b, a - 1),
        RingElem(1, b + 1, a + b),
        RingElem(1, b + 1, a + b + 1),
    ]
    for t in range(2, params.K + 1):
        base += [
            RingElem(0, 0, t),
            RingElem(0, t, t * (b + 1)),
            RingElem(t, t * (b + 1), t * (a + b + 1)),
        ]
    return {ZERO} | set(base) | {-e for e in base}


def base_states(params: Params) -> set[RingElem]:
    """E_{a,b} alone (0 and the six listed states, with negatives)."""
    a, b = params.a, params.b
    base = [
        RingElem(0, 0, 1),
        RingElem(0, 1, b),
        RingElem(0, 1, b + 1),
        RingElem(1, b, a - 1),
        RingElem(1, b + 1, a + b),
        RingElem(1, b + 1, a + b + 1),
    ]
    return {ZERO} | set(base) | {-e for e in base}


def extra_states(params: Params) -> set[RingElem]:
    """t + t(b+1) alpha + t(a+b+1) alpha^2 for 1 <= t <= K."""
    a, b = params.a, params.b
    return {RingElem(t, t * (b + 1), t * (a + b + 1)) for t in range(1, params.K + 1)}


def filter_is_harmless(params: Params, strict: bool = True, roots: RootData | None = None) -> bool:
    """True when the beta^3 filter removes no state that survives trimming."""
    roots = roots or solve_roots(params)
    plain = set(boundary_automaton(params, strict, False, roots).states)
    filtered = set(boundary_automaton(params, strict, True, roots).states)
    return plain == filtered


# ------------------------------------------------------------- neighbours

def _check_lattice(u: RingElem):
    if u.q != 0 or not u.is_integral():
        raise LatticeViolation(f"{u!r} is not in Z + Z*alpha")


def point_bound(params: Params, r) -> float:
    """Bound on |sum_{i>=2} l_i r^i| over digit sequences."""
    return (params.a - 1) * abs(r) ** 2 / (1 - abs(r))


def neighbor_candidates(params: Params, roots: RootData | None = None) -> list[RingElem]:
    """Nonzero u = m + n*alpha with every contracting embedding <= 2 * point bound."""
    roots = roots or solve_roots(params)
    if roots.is_complex:
        al = roots.alpha
        d = 2 * point_bound(params, al) * SLACK
        nmax = int(math.floor(d / abs(al.imag)))
        out = []
        for n in range(-nmax, nmax + 1):
            c = n * al
            for m in range(int(math.floor(-c.real - d)), int(math.ceil(-c.real + d)) + 1):
                if abs(m + c) <= d and (m or n):
                    out.append(RingElem(m, n, 0))
    else:
        al, lam = roots.alpha, roots.lam
        d1 = 2 * point_bound(params, al) * SLACK
        d2 = 2 * point_bound(params, lam) * SLACK
        nmax = int(math.floor((d1 + d2) / abs(lam - al)))
        out = []
        for n in range(-nmax, nmax + 1):
            lo = max(-n * al - d1, -n * lam - d2)
            hi = min(-n * al + d1, -n * lam + d2)
            for m in range(int(math.ceil(lo)), int(math.floor(hi)) + 1):
                if m or n:
                    out.append(RingElem(m, n, 0))
    return sorted(out, key=lambda u: (u.p, u.n))


def neighbor_test(params: Params, u: RingElem, strict: bool = True, roots: RootData | None = None) -> bool:
    """Whether R and R + u intersect (u = 0 is always true)."""
    _check_lattice(u)
    start = times_alpha(u, params)
    aut = trim(explore(params, start, strict=strict, roots=roots))
    return bool(aut.alive_starts())


@dataclass
class NeighborReport:
    params: Params
    H: list[RingElem]
    K: int
    disk_verdict: str
    candidates: int = 0
    automaton: DiffAutomaton | None = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return len(self.H)

    @property
    def lower_bound(self) -> int:
        return 6 + 2 * (self.K - 1)

    def symmetric(self) -> bool:
        hs = set(self.H)
        return all(-u in hs for u in hs)

    def to_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "H": [{"m": u.n, "n": u.p} for u in self.H],
            "count": self.count,
            "K": self.K,
            "lowerBound": self.lower_bound,
            "diskVerdict": self.disk_verdict,
        }


def neighbor_automaton(params: Params, strict: bool = True, roots: RootData | None = None) -> DiffAutomaton:
    """Trimmed automaton explored from alpha*u for every candidate u."""
    roots = roots or solve_roots(params)
    cands = neighbor_candidates(params, roots)
    starts = [times_alpha(u, params) for u in cands]
    return trim(explore(params, starts, strict=strict, roots=roots))


def neighbor_set(params: Params, strict: bool = True, roots: RootData | None = None) -> NeighborReport:
    roots = roots or solve_roots(params)
    cands = neighbor_candidates(params, roots)
    aut = neighbor_automaton(params, strict, roots)
    alive = {nd[0] for nd in aut.alive_starts()}
    H = [u for u in cands if times_alpha(u, params) in alive]
    return NeighborReport(params, H, params.K, disk_test(params), len(cands), aut)


def entry_states(params: Params, H: Iterable[RingElem]) -> set[RingElem]:
    """States m*alpha^2 and alpha*u crossed while reading u = m + n*alpha at indices 0, 1."""
    out = set()
    for u in H:
        out.add(RingElem(0, 0, u.n))
        out.add(times_alpha(u, params))
    return out


def disk_test(params: Params) -> str:
    """NotDisk when 2a + 3b + 4 <= 0; no converse is known."""
    return "NotDisk" if 2 * params.a + 3 * params.b + 4 <= 0 else "Unknown"


# ------------------------------------------------------------ certificates

def lasso(aut: DiffAutomaton, node: Node) -> tuple[list, list, int]:
    """A path from ``node`` that closes a cycle in the trimmed automaton.

    Returns (labels, nodes, k): labels[k:] repeat forever.  Successors are
    chosen deterministically (smallest label first).
    """
    seen = {node: 0}
    labels, nodes = [], [node]
    cur = node
    while True:
        succ = aut.graph[cur]
        nt, lab = min(
            ((t, min(lbl)) for t, lbl in succ.items()),
            key=lambda e: (e[1], e[0][0].sort_key(), e[0][1], e[0][2]),
        )
        labels.append(lab)
        if nt in seen:
            return labels, nodes, seen[nt]
        seen[nt] = len(nodes)
        nodes.append(nt)
        cur = nt


@dataclass(frozen=True)
class NeighborCertificate:
    """u + psi(x) = psi(y) with x, y admissible eventually periodic digit strings from index 2."""

    u: RingElem
    x: tuple[tuple[int, ...], tuple[int, ...]]
    y: tuple[tuple[int, ...], tuple[int, ...]]
    x_value: RingElem
    y_value: RingElem

    @property
    def holds(self) -> bool:
        return (self.u + self.x_value - self.y_value).normalized().is_zero()

    def to_dict(self) -> dict:
        return {
            "u": self.u.to_dict(),
            "x": {"preperiod": list(self.x[0]), "period": list(self.x[1])},
            "y": {"preperiod": list(self.y[0]), "period": list(self.y[1])},
            "point": self.y_value.to_dict(),
            "holds": self.holds,
        }


def neighbor_certificate(
    params: Params, u: RingElem, aut: DiffAutomaton | None = None, roots: RootData | None = None
) -> NeighborCertificate | None:
    """Exact witness that R and R + u meet, or None when they do not."""
    from .fractal import PeriodicDigitString, psi_exact

    _check_lattice(u)
    roots = roots or solve_roots(params)
    start = times_alpha(u, params)
    if aut is None:
        aut = trim(explore(params, start, roots=roots))
    node = next((n for n in aut.graph if n[0] == start and n[1] == 0 and n[2] == 0), None)
    if node is None:
        return None
    labels, _, k = lasso(aut, node)
    xs = [c for c, _ in labels]
    ys = [d for _, d in labels]
    xw = (tuple(xs[:k]), tuple(xs[k:]))
    yw = (tuple(ys[:k]), tuple(ys[k:]))
    xv = psi_exact(PeriodicDigitString(xw[0], xw[1], start=2), params)
    yv = psi_exact(PeriodicDigitString(yw[0], yw[1], start=2), params)
    return NeighborCertificate(u, xw, yw, xv, yv)


def boundary_points(
    params: Params,
    u: RingElem,
    depth: int,
    roots: RootData | None = None,
    aut: DiffAutomaton | None = None,
    limit: int = 3_000_000,
) -> np.ndarray:
    """Points of R cap (R + u) in the contracting plane.

    Every path of ``depth`` steps from alpha*u is completed by the lasso of
    its last node, so each returned point is exact up to float rounding.
    """
    _check_lattice(u)
    roots = roots or solve_roots(params)
    start = times_alpha(u, params)
    if aut is None:
        aut = trim(explore(params, start, roots=roots))
    root_node = next((n for n in aut.graph if n[0] == start and n[1] == 0 and n[2] == 0), None)
    if root_node is None:
        return np.empty(0, dtype=complex)

    if roots.is_complex:
        def powv(i):
            return roots.alpha**i
    else:
        def powv(i):
            return complex(roots.alpha**i, roots.lam**i)

    def mulp(z, w):
        if roots.is_complex:
            return z * w
        return complex(z.real * w.real, z.imag * w.imag)

    # tail value (as a series starting at alpha^0) of the y-component of each lasso
    tails: dict[Node, complex] = {}

    def tail(nd: Node) -> complex:
        if nd in tails:
            return tails[nd]
        labels, _, k = lasso(aut, nd)
        ys = [lab[1] for lab in labels]
        pre = sum((mulp(complex(y), powv(i)) for i, y in enumerate(ys[:k])), 0j)
        blk = sum((mulp(complex(y), powv(k + i)) for i, y in enumerate(ys[k:])), 0j)
        per = len(ys) - k
        q = powv(per)
        if roots.is_complex:
            val = pre + blk / (1 - q)
        else:
            val = pre + complex(blk.real / (1 - q.real), blk.imag / (1 - q.imag))
        tails[nd] = val
        return val

    # frontier of (node, accumulated point); digit at step j has index j + 2
    frontier = {root_node: [0j]}
    for j in range(depth):
        w = powv(j + 2)
        nxt: dict[Node, list] = {}
        total = 0
        for nd, pts in frontier.items():
            for nt, labs in aut.graph[nd].items():
                ds = sorted({lab[1] for lab in labs})
                bucket = nxt.setdefault(nt, [])
                for d in ds:
                    inc = mulp(complex(d), w)
                    bucket.extend(p + inc for p in pts)
                total += len(ds) * len(pts)
        frontier = {k: list(dict.fromkeys(v)) if len(v) > 1 else v for k, v in nxt.items()}
        if sum(len(v) for v in frontier.values()) > limit:
            raise MemoryError(f"boundary sample exceeds {limit} points at step {j}")
    shift = powv(depth + 2)
    out = []
    for nd, pts in frontier.items():
        tv = mulp(tail(nd), shift)
        out.extend(p + tv for p in pts)
    return np.unique(np.round(np.array(out, dtype=complex), 12))


# -------------------------------------------------------------- DOT output

def export_dot(aut: DiffAutomaton | None, name: str = "G") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=ellipse, fontname="Helvetica"];']
    if aut is not None:
        states = aut.states
        ids = {s: f"s{i}" for i, s in enumerate(states)}
        initial = {nd[0] for nd in aut.alive_starts()}
        for s in states:
            shape = ", peripheries=2" if s in initial else ""
            lines.append(f'  {ids[s]} [label="{s.label()}"{shape}];')
        for f, k, t in aut.edges():
            lines.append(f'  {ids[f]} -> {ids[t]} [label="c−d={k}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
