"""Small geometric primitives shared by warping, parsing, and rendering.

Coordinates are (x, y) with x along columns and y along rows; pixel centers
sit at integer coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from .errors import StructuralError


def pixel_grid(height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (xs, ys) float64 arrays of shape (H, W) at pixel centers."""
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    return xs, ys


def bilinear_sample(img: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Sample ``img`` at fractional (x, y) positions with edge clamping.

    ``img`` is (H, W) or (H, W, C); the result has the trailing channel axis
    of the input and the shape of ``x`` in front.
    """
    h, w = img.shape[:2]
    x = np.clip(x, 0.0, w - 1.0)
    y = np.clip(y, 0.0, h - 1.0)
    x0 = np.floor(x).astype(np.int64)
    y0 = np.floor(y).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = x - x0
    fy = y - y0
    if img.ndim == 3:
        fx = fx[..., None]
        fy = fy[..., None]
    top = img[y0, x0] * (1.0 - fx) + img[y0, x1] * fx
    bot = img[y1, x0] * (1.0 - fx) + img[y1, x1] * fx
    return top * (1.0 - fy) + bot * fy


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def soft_ellipse(height: int, width: int, center: tuple[float, float],
                 axes: tuple[float, float], angle: float = 0.0,
                 softness: float = 0.75) -> np.ndarray:
    """Soft-edged filled ellipse as an (H, W) mask in [0, 1].

    ``axes`` are the (x, y) semi-axes before rotation by ``angle`` radians;
    ``softness`` is the transition width in pixels.
    """
    ax, ay = axes
    if ax <= 0 or ay <= 0:
        raise StructuralError(f"ellipse axes must be positive, got {axes}")
    xs, ys = pixel_grid(height, width)
    dx = xs - center[0]
    dy = ys - center[1]
    c, s = np.cos(angle), np.sin(angle)
    u = dx * c + dy * s
    v = -dx * s + dy * c
    q = np.sqrt((u / ax) ** 2 + (v / ay) ** 2)
    # distance-like quantity: ~pixels outside the boundary
    d = (q - 1.0) * min(ax, ay)
    return _sigmoid(-d / softness)


def soft_convex_hull(height: int, width: int, points: np.ndarray,
                     softness: float = 0.75, margin: float = 0.0) -> np.ndarray:
    """Soft-edged convex hull of ``points`` as an (H, W) mask in [0, 1].

    ``margin`` grows (positive) or shrinks (negative) the hull by that many
    pixels before the soft edge is applied.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2 or len(points) < 3:
        raise StructuralError(f"need >= 3 (x, y) points for a hull, got {points.shape}")
    hull = ConvexHull(points)
    # hull.equations rows are [nx, ny, b] with n outward unit normal, n.p + b <= 0 inside
    xs, ys = pixel_grid(height, width)
    sdf = np.full((height, width), -np.inf)
    for nx, ny, b in hull.equations:
        sdf = np.maximum(sdf, nx * xs + ny * ys + b)
    return _sigmoid(-(sdf - margin) / softness)


@dataclass(frozen=True)
class Similarity:
    """2-D similarity transform p -> scale * R(angle) @ p + t."""

    scale: float
    angle: float
    tx: float
    ty: float

    def matrix(self) -> np.ndarray:
        c = np.cos(self.angle) * self.scale
        s = np.sin(self.angle) * self.scale
        return np.array([[c, -s, self.tx], [s, c, self.ty]], dtype=np.float64)

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        m = self.matrix()
        return pts @ m[:, :2].T + m[:, 2]

    def inverse(self) -> "Similarity":
        inv_scale = 1.0 / self.scale
        c = np.cos(-self.angle) * inv_scale
        s = np.sin(-self.angle) * inv_scale
        tx = -(c * self.tx - s * self.ty)
        ty = -(s * self.tx + c * self.ty)
        return Similarity(inv_scale, -self.angle, tx, ty)


def fit_similarity(src: np.ndarray, dst: np.ndarray) -> Similarity:
    """Least-squares similarity (no reflection) mapping ``src`` onto ``dst``."""
    src = np.asarray(src, dtype=np.float64)
    dst = np.asarray(dst, dtype=np.float64)
    if src.shape != dst.shape or src.ndim != 2 or src.shape[1] != 2:
        raise StructuralError(
            f"point sets must both be (N, 2), got {src.shape} and {dst.shape}"
        )
    mu_s = src.mean(axis=0)
    mu_d = dst.mean(axis=0)
    sc = src - mu_s
    dc = dst - mu_d
    var_s = (sc ** 2).sum()
    if var_s == 0.0:
        raise StructuralError("degenerate source points for similarity fit")
    # complex-number least squares for scale+rotation
    zs = sc[:, 0] + 1j * sc[:, 1]
    zd = dc[:, 0] + 1j * dc[:, 1]
    a = (np.conj(zs) * zd).sum() / var_s
    scale = abs(a)
    angle = np.angle(a)
    c = np.cos(angle) * scale
    s = np.sin(angle) * scale
    t = mu_d - np.array([c * mu_s[0] - s * mu_s[1], s * mu_s[0] + c * mu_s[1]])
    return Similarity(scale, angle, t[0], t[1])


def warp_similarity(img: np.ndarray, transform: Similarity,
                    out_height: int, out_width: int) -> np.ndarray:
    """Apply a similarity to an image by inverse-mapped bilinear sampling."""
    inv = transform.inverse()
    xs, ys = pixel_grid(out_height, out_width)
    pts = np.stack([xs.ravel(), ys.ravel()], axis=1)
    src = inv.apply(pts)
    out = bilinear_sample(img, src[:, 0].reshape(xs.shape), src[:, 1].reshape(ys.shape))
    return np.clip(out, 0.0, 1.0)
