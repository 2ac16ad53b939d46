"""Raster (binary PPM) and vector (SVG) output for point clouds and curves."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .boundary import DiffAutomaton, export_dot


class EmptyInput(ValueError):
    pass


class TooFewVertices(ValueError):
    pass


# translate order -> colour; index 0 is the central tile
PALETTE: tuple[tuple[int, int, int], ...] = (
    (31, 119, 180),
    (255, 127, 14),
    (44, 160, 44),
    (214, 39, 40),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
    (23, 190, 207),
)
BACKGROUND = (255, 255, 255)


@dataclass(frozen=True)
class Viewport:
    x0: float
    y0: float
    x1: float
    y1: float

    @classmethod
    def fit(cls, pts: np.ndarray, margin: float = 0.05) -> "Viewport":
        x0, x1 = float(pts.real.min()), float(pts.real.max())
        y0, y1 = float(pts.imag.min()), float(pts.imag.max())
        side = max(x1 - x0, y1 - y0)
        if side == 0:
            side = 1.0
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        half = side * (0.5 + margin)
        return cls(cx - half, cy - half, cx + half, cy + half)


@dataclass
class Canvas:
    width: int
    height: int
    viewport: Viewport
    pixels: np.ndarray  # (height, width, 3) uint8

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels, dtype=np.uint8).tobytes()

    def painted(self) -> int:
        return int(np.any(self.pixels != np.array(BACKGROUND, dtype=np.uint8), axis=2).sum())


def _color(c) -> tuple[int, int, int]:
    if isinstance(c, (int, np.integer)):
        return PALETTE[int(c) % len(PALETTE)]
    return tuple(int(v) for v in c)


def rasterize_canvas(
    clouds: Sequence[tuple[np.ndarray, object]],
    width: int = 512,
    height: int = 512,
    viewport: Viewport | None = None,
) -> Canvas:
    """Paint clouds in order; later clouds overwrite earlier ones."""
    arrays = [np.asarray(p, dtype=complex).ravel() for p, _ in clouds]
    if not arrays or sum(len(a) for a in arrays) == 0:
        raise EmptyInput("nothing to draw")
    if viewport is None:
        viewport = Viewport.fit(np.concatenate(arrays))
    px = np.empty((height, width, 3), dtype=np.uint8)
    px[:] = BACKGROUND
    sx = width / (viewport.x1 - viewport.x0)
    sy = height / (viewport.y1 - viewport.y0)
    for pts, (_, col) in zip(arrays, clouds):
        ix = np.floor((pts.real - viewport.x0) * sx).astype(np.int64)
        # row 0 is the top of the image
        iy = np.floor((viewport.y1 - pts.imag) * sy).astype(np.int64)
        ok = (ix >= 0) & (ix < width) & (iy >= 0) & (iy < height)
        px[iy[ok], ix[ok]] = _color(col)
    return Canvas(width, height, viewport, px)


def rasterize(clouds, width: int = 512, height: int = 512, viewport: Viewport | None = None) -> bytes:
    """P6 bytes for a list of (points, colour) pairs."""
    return rasterize_canvas(clouds, width, height, viewport).to_ppm()


def read_ppm(data: bytes) -> np.ndarray:
    magic, w, h, mx, rest = data.split(maxsplit=4)
    if magic != b"P6" or int(mx) != 255:
        raise ValueError("not an 8-bit P6 image")
    return np.frombuffer(rest, dtype=np.uint8).reshape(int(h), int(w), 3)


def svg_polyline(
    vertices,
    stroke: str = "black",
    width: float = 0.002,
    closed: bool = False,
    pixels: int = 512,
) -> str:
    """A standalone SVG holding one open (or closed) path through ``vertices``.

    Coordinates are the plane coordinates rounded to 1e-6, y flipped.
    """
    v = np.asarray(vertices, dtype=complex).ravel()
    if len(v) < 2:
        raise TooFewVertices("a polyline needs at least two vertices")
    vp = Viewport.fit(v)
    # adding 0.0 turns -0.0 into 0.0 so the text is sign-stable
    xs = np.round(v.real, 6) + 0.0
    ys = np.round(-v.imag, 6) + 0.0
    cmds = [f"M{xs[0]:.6f},{ys[0]:.6f}"]
    cmds += [f"L{x:.6f},{y:.6f}" for x, y in zip(xs[1:], ys[1:])]
    if closed:
        cmds.append("Z")
    vb = f"{vp.x0:.6f} {-vp.y1:.6f} {vp.x1 - vp.x0:.6f} {vp.y1 - vp.y0:.6f}"
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{pixels}" height="{pixels}" viewBox="{vb}">\n'
        f'<path d="{" ".join(cmds)}" fill="none" stroke="{stroke}" stroke-width="{width}"/>\n'
        "</svg>\n"
    )


def dot(aut: DiffAutomaton | None, name: str = "G") -> str:
    return export_dot(aut, name)
