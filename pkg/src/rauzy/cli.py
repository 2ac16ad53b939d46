"""Command line entry point.

Every subcommand prints a JSON report {command, params, inputs, outputs,
checks} to stdout and writes it to ``<out-dir>/<command>.json``.  Exit code
0 on success, 2 on invalid input, 3 when an internal check fails.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import boundary, fractal, ifs32, numeration, render
from .ring import Params, ParamsError, discriminant, plane_point, solve_roots, valid_params

log = logging.getLogger("rauzy")

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 2, 3


class CheckFailed(RuntimeError):
    pass


def _schema() -> dict:
    return json.loads(resources.files("rauzy").joinpath("report.schema.json").read_text())


class Report:
    def __init__(self, command: str, params: Params, inputs: dict):
        self.data = {
            "command": command,
            "params": params.as_dict(),
            "inputs": inputs,
            "outputs": {},
            "checks": [],
            "files": {},
        }

    def check(self, name: str, ok: bool, detail=None) -> bool:
        self.data["checks"].append({"name": name, "pass": bool(ok), "detail": detail})
        return ok

    def file(self, key: str, path: Path):
        self.data["files"][key] = str(path)

    @property
    def outputs(self) -> dict:
        return self.data["outputs"]

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.data["checks"])

    def finish(self, out_dir: Path) -> dict:
        doc = dict(self.data)
        # output keys are mirrored at top level for direct lookup
        for k, v in self.data["outputs"].items():
            doc.setdefault(k, v)
        jsonschema.validate(doc, _schema())
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{doc['command']}.json").write_text(json.dumps(doc, indent=2, default=_jsonable))
        return doc


def _jsonable(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    return str(o)


def _cplx(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _point_rows(pts: np.ndarray, real_case: bool) -> list[dict]:
    if real_case:
        return [{"x": float(z.real), "y": float(z.imag)} for z in pts]
    return [{"re": float(z.real), "im": float(z.imag)} for z in pts]


# ------------------------------------------------------------ commands

def cmd_expand(args, params: Params, rep: Report):
    w = numeration.greedy_expand(args.n, params)
    digits = w.descending()
    rep.outputs.update(input=args.n, digits=digits, valid=numeration.is_admissible(digits, params),
                       value=numeration.word_value(w, params))
    rep.check("round-trip", rep.outputs["value"] == args.n, {"value": rep.outputs["value"]})


def cmd_tseq(args, params: Params, rep: Report):
    t = numeration.t_sequence(params, args.N).values
    rep.outputs.update(input=args.N, values=list(t))
    ok = all(numeration.lemma22_check(params, n) for n in range(4, args.N + 1))
    rep.check("lemma22", ok, {"range": [4, args.N]})


def cmd_admissible(args, params: Params, rep: Report):
    try:
        digits = [int(x) for x in args.digits.replace(",", " ").split()]
    except ValueError as e:
        raise ValueError(f"digits must be integers: {args.digits!r}") from e
    valid = numeration.is_admissible(digits, params)
    value = numeration.word_value(numeration.DigitWord(tuple(reversed(digits))), params) if valid else None
    rep.outputs.update(input=args.digits, digits=digits, valid=valid, value=value)
    if valid:
        back = numeration.greedy_expand(value, params).descending()
        stripped = digits[next((i for i, d in enumerate(digits) if d), len(digits)):]
        rep.check("greedy agrees", back == stripped, {"greedy": back})


def cmd_roots(args, params: Params, rep: Report):
    r = solve_roots(params)
    rep.outputs.update(beta=r.beta, case=r.case, discriminant=discriminant(params))
    if r.is_complex:
        rep.outputs.update(alpha=_cplx(r.alpha), lam=_cplx(r.lam))
    else:
        rep.outputs.update(alpha=r.alpha, lam=r.lam)
    prod = r.beta * r.alpha * r.lam
    rep.check("unit", abs(prod - 1) < 1e-9, {"product": abs(prod)})
    rep.check("pisot", abs(r.alpha) < 1 and abs(r.lam) < 1 < r.beta, None)


def cmd_points(args, params: Params, rep: Report):
    r = solve_roots(params)
    cloud = fractal.generate_points(params, args.depth, r)
    out = Path(args.out_dir) / args.out
    if out.suffix == ".ppm":
        out.write_bytes(render.rasterize([(cloud.points, 0)], args.size, args.size))
    else:
        out.write_text(json.dumps({"params": params.as_dict(), "depth": args.depth,
                                   "points": _point_rows(cloud.points, not r.is_complex)}))
    rep.file("cloud", out)
    rep.outputs.update(count=len(cloud), tail=fractal.tail_bound(params, r, args.depth))
    rep.check("nonempty", len(cloud) > 0, len(cloud))


def cmd_tiling(args, params: Params, rep: Report):
    r = solve_roots(params)
    patch = fractal.tiling_patch(params, r, args.radius, args.depth)
    out = Path(args.out_dir) / args.out
    out.write_bytes(render.rasterize([(c.points, i) for i, (_, c) in enumerate(patch)], args.size, args.size))
    rep.file("tiling", out)
    rep.outputs.update(translates=[u.to_dict() for u, _ in patch])
    if args.check:
        cov = fractal.covering_check(params, r, args.depth)
        rep.outputs["covering"] = cov
        rep.check("covering", cov["covered"] == cov["samples"], cov["max_distance"] / cov["pixel"])
        rep.check("overlap", cov["overlap"] <= 0.05, cov["overlap"])


def cmd_automaton(args, params: Params, rep: Report):
    aut = boundary.boundary_automaton(params, strict=args.strict_language, lemma45filter=args.lemma45)
    d = aut.to_dict()
    rep.outputs.update(states=d["states"], edges=d["edges"], stateCount=len(aut.states))
    if args.dot:
        p = Path(args.out_dir) / args.dot
        p.write_text(render.dot(aut, f"G_{params.a}_{-params.b}"))
        rep.file("dot", p)
    if args.json:
        p = Path(args.out_dir) / args.json
        p.write_text(json.dumps(d, indent=1))
        rep.file("json", p)
    states = set(aut.states)
    rep.check("contains E_ab", boundary.base_states(params) <= states, None)
    rep.check("negation symmetric", all(-s in states for s in states), None)
    lb = 2 * (6 + 2 * (params.K - 1))
    rep.check("state lower bound", len(states - {boundary.ZERO}) >= lb, {"nonzero": len(states) - 1, "bound": lb})


def cmd_neighbors(args, params: Params, rep: Report):
    nr = boundary.neighbor_set(params, strict=args.strict_language)
    rep.outputs.update(nr.to_dict())
    rep.outputs.pop("params", None)
    if args.certificates:
        rep.outputs["certificates"] = [boundary.neighbor_certificate(params, u).to_dict() for u in nr.H]
    rep.check("lower bound", nr.count >= nr.lower_bound, {"count": nr.count, "bound": nr.lower_bound})
    rep.check("symmetric", nr.symmetric(), None)


def cmd_disk(args, params: Params, rep: Report):
    v = boundary.disk_test(params)
    rep.outputs.update(diskVerdict=v, criterion=2 * params.a + 3 * params.b + 4)
    rep.check("verdict", v in ("NotDisk", "Unknown"), v)


def _require32(params: Params):
    if (params.a, params.b) != (3, -2):
        raise ValueError("the explicit IFS is only defined for (a, b) = (3, -2)")


def cmd_ifs(args, params: Params, rep: Report):
    _require32(params)
    S = ifs32.curve_samples(depth=args.samples_depth)
    diam, px = ifs32.curve_diameter(S), ifs32.raster_eps(S)
    eps = args.eps * diam
    if args.family == "cover":
        maps = ifs32.cover_family(args.kmax)
    else:
        maps = ifs32.truncated_family(eps, diam, args.family)
    seed = plane_point(ifs32.z0(), ifs32.roots32())
    pts = ifs32.attractor(maps, args.depth, seed, eps=eps, diam=diam)
    h = fractal.hausdorff_distance(pts, S)
    rep.outputs.update(count=len(pts), maps=[m.name for m in maps], hausdorffPixels=h / px, pixel=px)
    out = Path(args.out_dir) / f"ifs_{args.family}.{args.out}"
    if args.out == "svg":
        out.write_text(render.svg_polyline(pts[np.lexsort((pts.imag, pts.real))][:: max(1, len(pts) // 20000)]))
    else:
        out.write_text(json.dumps({"points": _point_rows(pts, False)}))
    rep.file(args.out, out)
    rep.check("hausdorff <= 3 px", h <= 3 * px, h / px)


def cmd_param(args, params: Params, rep: Report):
    _require32(params)
    S = ifs32.curve_samples(depth=16)
    diam = ifs32.curve_diameter(S)
    phi = ifs32.parametrize_phi(args.level, diam=diam)
    prev = ifs32.parametrize_phi(args.level - 1, diam=diam) if args.level >= 1 else None
    rep.outputs.update(level=args.level, vertices=len(phi))
    if prev is not None:
        rep.outputs["supDistance"] = ifs32.sup_distance(phi, prev)
    out = Path(args.out_dir) / f"phi_{args.level}.{args.out}"
    if args.out == "svg":
        out.write_text(render.svg_polyline(phi.vertices))
    else:
        out.write_text(json.dumps({"t": phi.t.tolist(), "vertices": _point_rows(phi.vertices, False)}))
    rep.file(args.out, out)
    d = fractal.directed_hausdorff(phi.vertices, S)
    rep.check("vertices on curve", d <= 3 * ifs32.raster_eps(S), d)


def verify_all(amax: int) -> list[tuple[str, bool, object]]:
    out = []
    for p in valid_params(amax):
        ok = all(numeration.lemma22_check(p, n) for n in range(4, 61))
        out.append((f"lemma22 {p.a},{p.b}", ok, None))
        try:
            fractal.verify_lemma33(p)
            out.append((f"lemma33 {p.a},{p.b}", True, None))
        except fractal.IdentityFailed as e:
            out.append((f"lemma33 {p.a},{p.b}", False, str(e)))
    tps = ifs32.triple_points()
    out.append(("triple point shifts", all(ifs32.triple_point_shifts()), [t.value.to_dict() for t in tps]))
    for name, ok in ifs32.exact_adjacencies(10):
        out.append((name, ok, None))
    return out


def cmd_verify(args, params: Params, rep: Report):
    for name, ok, detail in verify_all(args.amax):
        rep.check(name, ok, detail)
    rep.outputs.update(total=len(rep.data["checks"]), failed=sum(not c["pass"] for c in rep.data["checks"]))
    if not rep.ok:
        raise CheckFailed("exact identity violated")


FIGURES = {
    "fig_R.png": "point cloud of R_{a,b}",
    "R.ppm": "the same cloud as a raster",
    "automaton.dot": "trimmed boundary automaton",
    "phi_2.svg": "phi_2 as a vector path",
    "fig_R65.png": "R_{6,-5} point cloud (totally real case)",
    "fig_tiling.png": "periodic tiling patch around R_{3,-2}",
    "fig_neighbors.png": "R_{3,-2} with its six neighbours",
    "fig_triple.png": "boundary curves R_u and the six triple points",
    "fig_ifs.png": "f and g images of R_{1-2alpha}",
    "fig_phi.png": "polygonal approximations phi_1..phi_3",
    "fig_phi_decay.png": "sup distance between successive phi_n",
    "fig_R87_neighbors.png": "R_{8,-7} neighbour translates",
}


def cmd_render_all(args, params: Params, rep: Report):
    from . import figures

    out_dir = Path(args.out_dir)
    r = solve_roots(params)
    cloud = fractal.generate_points(params, args.depth, r)
    eq = r.is_complex
    rep.file("fig_R.png", figures.scatter_clouds([(cloud.points, 0, None)], out_dir / "fig_R.png",
                                                 f"R_{{{params.a},{params.b}}}", equal=eq))
    (out_dir / "R.ppm").write_bytes(render.rasterize([(cloud.points, 0)]))
    rep.file("R.ppm", out_dir / "R.ppm")
    patch = fractal.tiling_patch(params, r, 1.2, cloud=cloud)
    rep.file("fig_tiling.png", figures.scatter_clouds(
        [(c.points, i, None) for i, (_, c) in enumerate(patch)], out_dir / "fig_tiling.png", FIGURES["fig_tiling.png"], equal=eq))
    nr = boundary.neighbor_set(params)
    clouds = [(cloud.points, 0, "R")] + [
        (cloud.points + plane_point(u, r), i + 1, f"R+({u.label()})") for i, u in enumerate(nr.H[:7])
    ]
    rep.file("fig_neighbors.png", figures.scatter_clouds(clouds, out_dir / "fig_neighbors.png",
                                                         f"neighbours: {nr.count}", equal=eq))
    aut = boundary.boundary_automaton(params)
    (out_dir / "automaton.dot").write_text(render.dot(aut, f"G_{params.a}_{-params.b}"))
    rep.file("automaton.dot", out_dir / "automaton.dot")
    rep.outputs.update(points=len(cloud), neighbors=nr.count, states=len(aut.states))
    rep.check("neighbour lower bound", nr.count >= nr.lower_bound, nr.count)

    if (params.a, params.b) == (3, -2):
        _figures32(out_dir, rep, cloud.points)
    rep.outputs["figureIndex"] = {k: v for k, v in FIGURES.items() if k in rep.data["files"]}


def _figures32(out_dir: Path, rep: Report, cloud: np.ndarray):
    from . import figures

    r = ifs32.roots32()
    curves = {lab: ifs32.curve_samples(u, 16) for lab, u in (
        ("alpha", ifs32.U_ALPHA), ("1-alpha", ifs32.U_1MA), ("1-2alpha", ifs32.U_1M2A),
        ("-alpha", -ifs32.U_ALPHA), ("-(1-alpha)", -ifs32.U_1MA), ("-(1-2alpha)", -ifs32.U_1M2A))}
    marks = [(plane_point(t.value, r), f"T{t.index}") for t in ifs32.triple_points()]
    rep.file("fig_triple.png", figures.scatter_clouds(
        [(c, i, f"R_{{{lab}}}") for i, (lab, c) in enumerate(curves.items())],
        out_dir / "fig_triple.png", FIGURES["fig_triple.png"], marks=marks, size=0.2))
    S = curves["1-2alpha"]
    diam = ifs32.curve_diameter(S)
    imgs = [(m(S), i, m.name) for i, m in enumerate([ifs32.f_map(k) for k in range(4)] + [ifs32.g_map(k) for k in range(3)])]
    rep.file("fig_ifs.png", figures.scatter_clouds(imgs, out_dir / "fig_ifs.png", FIGURES["fig_ifs.png"], size=0.3))
    phis = [ifs32.parametrize_phi(n, diam=diam) for n in range(0, 6)]
    rep.file("fig_phi.png", figures.polylines([(phis[n].vertices, f"phi_{n}") for n in (1, 2, 3)],
                                              out_dir / "fig_phi.png", FIGURES["fig_phi.png"], backdrop=S))
    d = [ifs32.sup_distance(phis[n + 1], phis[n]) for n in range(5)]
    rep.file("fig_phi_decay.png", figures.decay_plot(list(range(1, 6)), d, abs(r.alpha) ** 2,
                                                     out_dir / "fig_phi_decay.png", FIGURES["fig_phi_decay.png"]))
    (out_dir / "phi_2.svg").write_text(render.svg_polyline(phis[2].vertices))
    rep.file("phi_2.svg", out_dir / "phi_2.svg")
    r65 = Params(6, -5)
    c65 = fractal.generate_points(r65, 8, solve_roots(r65))
    rep.file("fig_R65.png", figures.scatter_clouds([(c65.points, 2, None)], out_dir / "fig_R65.png",
                                                   FIGURES["fig_R65.png"], equal=False))
    p87 = Params(8, -7)
    r87 = solve_roots(p87)
    c87 = fractal.generate_points(p87, 7, r87)
    n87 = boundary.neighbor_set(p87, roots=r87)
    rep.file("fig_R87_neighbors.png", figures.scatter_clouds(
        [(c87.points, 0, "R")] + [(c87.points + plane_point(u, r87), 1 + i % 7, None) for i, u in enumerate(n87.H)],
        out_dir / "fig_R87_neighbors.png", f"R_{{8,-7}}: {n87.count} neighbours", equal=False))
    rep.check("phi decay", all(d[i + 1] <= (abs(r.alpha) + 0.1) * d[i] for i in range(4)), d)


# ------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rauzy", description="Rauzy fractals of cubic Pisot units x^3 - a x^2 - b x - 1")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, defaults=True):
        p = sub.add_parser(name)
        p.add_argument("--a", type=int, default=3 if defaults else None, required=not defaults)
        p.add_argument("--b", type=int, default=-2 if defaults else None, required=not defaults)
        p.add_argument("--out-dir", default=".")
        p.add_argument("-v", "--verbose", action="store_true")
        p.set_defaults(func=fn)
        return p

    p = add("expand", cmd_expand)
    p.add_argument("--n", type=int, required=True)
    p = add("tseq", cmd_tseq)
    p.add_argument("--N", type=int, default=10)
    p = add("admissible", cmd_admissible)
    p.add_argument("--digits", required=True, help="most significant digit first, e.g. '2 0 1'")
    add("roots", cmd_roots)
    p = add("points", cmd_points)
    p.add_argument("--depth", type=int, default=14)
    p.add_argument("--out", default="cloud.json", help="cloud.json or cloud.ppm")
    p.add_argument("--size", type=int, default=512)
    p = add("tiling", cmd_tiling)
    p.add_argument("--radius", type=float, default=1.2)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--out", default="tiling.ppm")
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--check", action="store_true", help="run the covering and overlap estimate")
    for name, fn in (("automaton", cmd_automaton), ("neighbors", cmd_neighbors)):
        p = add(name, fn, defaults=False)
        p.add_argument("--strict-language", action=argparse.BooleanOptionalAction, default=True)
    p = sub.choices["automaton"]
    p.add_argument("--lemma45", action="store_true", help="also prune states with |beta-embedding| >= beta^3")
    p.add_argument("--dot")
    p.add_argument("--json")
    sub.choices["neighbors"].add_argument("--certificates", action="store_true")
    add("disk", cmd_disk, defaults=False)
    p = add("ifs", cmd_ifs)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--family", choices=["f", "g", "fg", "cover"], default="fg")
    p.add_argument("--out", choices=["svg", "json"], default="json")
    p.add_argument("--kmax", type=int, default=12)
    p.add_argument("--eps", type=float, default=1e-4, help="truncation diameter, relative to the curve")
    p.add_argument("--samples-depth", type=int, default=16)
    p = add("param", cmd_param)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--out", choices=["svg", "json"], default="svg")
    p = add("verify-lemmas", cmd_verify)
    p.add_argument("--amax", type=int, default=10)
    p.add_argument("--json", action="store_true", help="accepted for compatibility; reports are always JSON")
    p = add("render-all", cmd_render_all)
    p.add_argument("--depth", type=int, default=14)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        params = Params(args.a, args.b)
    except ParamsError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "a", "b", "command", "verbose")}
    rep = Report(args.command, params, inputs)
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    try:
        args.func(args, params, rep)
    except (ValueError, fractal.BudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (CheckFailed, ArithmeticError, AssertionError) as e:
        rep.check("internal", False, str(e))
        doc = rep.finish(Path(args.out_dir))
        print(json.dumps(doc, default=_jsonable))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    rep.outputs["seconds"] = round(time.perf_counter() - t0, 3)
    doc = rep.finish(Path(args.out_dir))
    print(json.dumps(doc, default=_jsonable))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
