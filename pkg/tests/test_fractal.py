from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from rauzy.fractal import (
    BudgetExceeded,
    EmptySet,
    IdentityFailed,
    Lattice,
    PeriodicDigitString,
    covering_check,
    directed_hausdorff,
    generate_points,
    hausdorff_distance,
    lemma33_strings,
    psi_exact,
    psi_numeric,
    tail_bound,
    tiling_patch,
    verify_lemma33,
)
from rauzy.numeration import is_admissible
from rauzy.ring import ONE, ZERO, Params, RingElem, alpha_pow, embed, field_div, mul, plane_point, poly, solve_roots, valid_params


def test_psi_matches_numeric_on_random_strings():
    rng = random.Random(7)
    params = valid_params(8)
    for _ in range(100):
        p = rng.choice(params)
        r = solve_roots(p)
        s = PeriodicDigitString(
            tuple(rng.randint(-3, p.a) for _ in range(rng.randint(0, 6))),
            tuple(rng.randint(-3, p.a) for _ in range(rng.randint(1, 6))),
            rng.randint(0, 3),
        )
        exact = psi_exact(s, p)
        assert abs(embed(exact, "alpha", r) - psi_numeric(s, r.alpha)) < 1e-10
        if not r.is_complex:
            assert abs(embed(exact, "lambda", r) - psi_numeric(s, r.lam)) < 1e-10


def test_psi_examples(p32):
    assert psi_exact(PeriodicDigitString(), p32) == ZERO
    assert psi_exact(PeriodicDigitString((0, 0), (0,)), p32) == ZERO
    z1 = psi_exact(PeriodicDigitString((1, -2, 2)), p32)
    assert z1 == RingElem(1, -2, 2)
    # 0000 (011000)^inf = (alpha^5 + alpha^6) / (1 - alpha^6)
    w = psi_exact(PeriodicDigitString((0, 0, 0, 0), (0, 1, 1, 0, 0, 0)), p32)
    want = field_div(alpha_pow(5, p32) + alpha_pow(6, p32), ONE - alpha_pow(6, p32), p32)
    assert w == want.normalized()
    assert w == verify_lemma33(p32)["w"]


def test_period_three_block_breaks_identity(p32):
    # reading the repeating block with period three does not give w1 = w2
    s = lemma33_strings(p32)
    short = PeriodicDigitString(s["w1"].preperiod, s["w1"].period[:3])
    assert psi_exact(short, p32) != psi_exact(s["w2"], p32)


@pytest.mark.parametrize("p", valid_params(10), ids=str)
def test_lemma33_all_params(p):
    out = verify_lemma33(p)
    v = out["values"]
    assert v["w1"] == v["w2"] == v["w3"]
    assert v["z1"] == v["z2"] == RingElem(1, p.b, p.a - 1)


def _dist_to_tile(p, r, depth, z, u):
    cloud = generate_points(p, depth, r)
    return float(np.min(np.abs(cloud.points + plane_point(u, r) - z)))


@pytest.mark.parametrize("p,depth", [(Params(3, -2), 16), (Params(5, -2), 11)], ids=str)
def test_lemma33_memberships_that_hold(p, depth):
    r = solve_roots(p)
    tol = tail_bound(p, r, depth)
    out = verify_lemma33(p)
    w, z = plane_point(out["w"], r), plane_point(out["z"], r)
    assert _dist_to_tile(p, r, depth, w, ZERO) <= tol
    assert _dist_to_tile(p, r, depth, w, RingElem(1, p.b + 1, 0)) <= tol
    assert _dist_to_tile(p, r, depth, z, ZERO) <= tol
    assert _dist_to_tile(p, r, depth, z, RingElem(1, p.b, 0)) <= tol


@pytest.mark.xfail(strict=True, reason="w1 is not a point of R + alpha: the w2 string carries the negative digit b")
def test_lemma33_w1_in_r_plus_alpha(p32, r32):
    w = plane_point(verify_lemma33(p32)["w"], r32)
    assert _dist_to_tile(p32, r32, 16, w, RingElem(0, 1, 0)) <= tail_bound(p32, r32, 16)


def test_identity_failed_is_arithmetic_error():
    assert issubclass(IdentityFailed, ArithmeticError)


@pytest.mark.parametrize("p", valid_params(5), ids=str)
def test_depth2_has_a_points(p):
    r = solve_roots(p)
    c = generate_points(p, 2, r)
    want = np.array([d * plane_point(alpha_pow(2, p), r) for d in range(p.a)])
    assert len(c) == p.a
    assert np.allclose(np.sort_complex(c.points), np.sort_complex(want))


def test_depth3_count(p32, r32):
    pairs = sum(is_admissible([l3, l2], p32) for l3 in range(3) for l2 in range(3))
    assert pairs == 7
    assert len(generate_points(p32, 3, r32)) == 7


@pytest.mark.parametrize("p", [Params(3, -2), Params(4, -3), Params(5, -2), Params(6, -5)], ids=str)
def test_cloud_is_exactly_the_admissible_words(p):
    r = solve_roots(p)
    depth = 7 if p.a <= 4 else 5
    c = generate_points(p, depth, r, keep_words=True)
    words = {tuple(w) for w in c.words.tolist()}
    want = {
        w for w in itertools.product(range(p.a), repeat=depth - 1) if is_admissible(list(reversed(w)), p)
    }
    assert words == want and len(c) == len(want)
    # each point is the embedding of its word
    for w, z in zip(c.words.tolist()[:200], c.points[:200]):
        assert abs(plane_point(poly(w, p, shift=2), r) - z) < 1e-12


def test_cloud_radius_bound(p32, r32):
    c = generate_points(p32, 12, r32)
    ra = abs(r32.alpha)
    assert np.max(np.abs(c.points)) <= (p32.a - 1) * ra**2 / (1 - ra) + 1e-12


def test_monotone_refinement(p32, r32):
    c5 = generate_points(p32, 8, r32)
    c6 = generate_points(p32, 9, r32)
    assert directed_hausdorff(c5.points, c6.points) < 1e-12


def test_totally_real_cloud_uses_pair_embedding():
    p = Params(6, -5)
    r = solve_roots(p)
    c = generate_points(p, 2, r)
    assert np.allclose(sorted(c.points.real), [d * r.alpha**2 for d in range(6)])
    assert np.allclose(sorted(c.points.imag), [d * r.lam**2 for d in range(6)])


def test_budget_exceeded(p32, r32, monkeypatch):
    with pytest.raises(BudgetExceeded):
        generate_points(p32, 12, r32, max_points=1000)
    monkeypatch.setenv("RAUZY_BUDGET", "500")
    with pytest.raises(BudgetExceeded):
        generate_points(p32, 10, r32)


def test_budget_warning(p32, r32, monkeypatch, caplog):
    monkeypatch.setenv("RAUZY_BUDGET", "100000")
    with caplog.at_level("WARNING"):
        generate_points(p32, 11, r32)
    assert "budget" in caplog.text


def test_depth_below_two_rejected(p32, r32):
    with pytest.raises(ValueError):
        generate_points(p32, 1, r32)


def test_tail_bound_is_respected(p32, r32):
    deep = generate_points(p32, 14, r32)
    shallow = generate_points(p32, 8, r32)
    assert directed_hausdorff(deep.points, shallow.points) <= tail_bound(p32, r32, 8)


def test_lattice(r32):
    lat = Lattice.standard(r32)
    assert lat.e1 == 1 and lat.e2 == r32.alpha
    assert abs(lat.covolume - abs(r32.alpha.imag)) < 1e-15
    pts = lat.points_within(1.0)
    assert (0, 0, 0j) in pts
    brute = {(i, j) for i in range(-10, 11) for j in range(-10, 11) if abs(i + j * r32.alpha) <= 1.0}
    assert {(i, j) for i, j, _ in pts} == brute


def test_tiling_patch(p32, r32):
    patch = tiling_patch(p32, r32, 1.2, depth=8)
    assert patch[0][0] == ZERO
    us = [u for u, _ in patch]
    for u in (RingElem(0, 1, 0), RingElem(1, -1, 0)):
        assert u in us
    for u, c in patch:
        assert abs(plane_point(u, r32)) <= 1.2
        assert u.q == 0
    with pytest.raises(ValueError):
        tiling_patch(p32, r32, 0)


def test_covering(p32, r32):
    rep = covering_check(p32, r32, depth=14, samples=10_000)
    assert rep["covered"] == rep["samples"] == 10_000
    assert rep["max_distance"] <= rep["pixel"]
    assert rep["overlap"] <= 0.05


def test_hausdorff_against_cdist():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = rng.normal(size=60) + 1j * rng.normal(size=60)
        b = rng.normal(size=45) + 1j * rng.normal(size=45)
        d = cdist(np.c_[a.real, a.imag], np.c_[b.real, b.imag])
        want = max(d.min(axis=1).max(), d.min(axis=0).max())
        assert abs(hausdorff_distance(a, b) - want) < 1e-12
        assert hausdorff_distance(a, b) == hausdorff_distance(b, a)


def test_hausdorff_trivial():
    a = np.array([1 + 1j, 2, 3j])
    assert hausdorff_distance(a, a) == 0
    z = 3 - 4j
    assert hausdorff_distance(np.array([0j]), np.array([z])) == pytest.approx(5.0)
    with pytest.raises(EmptySet):
        hausdorff_distance(np.array([], dtype=complex), a)
    with pytest.raises(EmptySet):
        directed_hausdorff(a, np.zeros((0, 2)))


def test_mul_consistency_of_lemma_values(p32):
    # w1 * (1 - alpha^6) is the finite block polynomial
    w = verify_lemma33(p32)["w"]
    lhs = mul(w, ONE - alpha_pow(6, p32), p32)
    assert lhs == poly([0, 0, 0, 0, 0, 1, 1], p32)
