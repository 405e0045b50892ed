"""Classical landmark-based morphing.

The reference attack and the supervision signal for the generative stage:
interpolate the two landmark sets, Delaunay-triangulate the average
(augmented with 8 fixed border anchors so the whole frame is covered),
warp both images onto the average geometry with per-triangle affine maps
and inverse-mapped bilinear sampling, then alpha-blend.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay

from .errors import DataError, StructuralError
from .geometry import bilinear_sample, pixel_grid
from .images import validate_image, validate_landmarks

N_ANCHORS = 8


def validate_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise StructuralError(f"morph factor must be in [0, 1], got {alpha}")
    return alpha


def border_anchors(resolution: int) -> np.ndarray:
    """Four corners and four edge midpoints of the image rectangle."""
    m = float(resolution - 1)
    h = m / 2.0
    return np.array([
        [0.0, 0.0], [m, 0.0], [0.0, m], [m, m],
        [h, 0.0], [h, m], [0.0, h], [m, h],
    ])


def interpolate_landmarks(l1: np.ndarray, l2: np.ndarray, alpha: float) -> np.ndarray:
    """Pointwise (1-alpha)*l1 + alpha*l2."""
    l1 = np.asarray(l1, dtype=np.float64)
    l2 = np.asarray(l2, dtype=np.float64)
    if l1.shape != l2.shape:
        raise StructuralError(
            f"landmark sets differ in shape: {l1.shape} vs {l2.shape}"
        )
    alpha = validate_alpha(alpha)
    return (1.0 - alpha) * l1 + alpha * l2


@dataclass
class TriangleMesh:
    """Triangulation over landmarks plus border anchors.

    ``vertices`` holds the 68 landmarks followed by the 8 anchors;
    ``triangles`` are index triples into ``vertices``.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    resolution: int
    _qhull: Delaunay = field(repr=False)

    def locate(self, points: np.ndarray) -> np.ndarray:
        """Containing-triangle index for each (x, y) point; nudges boundary
        points toward the frame center rather than reporting them outside."""
        simplex = self._qhull.find_simplex(points)
        missing = simplex < 0
        if missing.any():
            center = np.array([(self.resolution - 1) / 2.0] * 2)
            nudged = points[missing] + 1e-6 * (center - points[missing])
            simplex[missing] = self._qhull.find_simplex(nudged)
        if (simplex < 0).any():
            raise StructuralError("points outside the triangulated frame")
        return simplex


def triangulate(points: np.ndarray, resolution: int) -> TriangleMesh:
    """Delaunay triangulation over ``points`` augmented with border anchors."""
    points = validate_landmarks(points) if len(points) == 68 else np.asarray(points, dtype=np.float64)
    if resolution <= 0:
        raise StructuralError(f"resolution must be positive, got {resolution}")
    vertices = np.concatenate([points, border_anchors(resolution)])
    try:
        qhull = Delaunay(vertices)
    except Exception as exc:
        raise StructuralError(f"triangulation failed: {exc}") from exc
    tris = np.sort(qhull.simplices, axis=1)
    order = np.lexsort((tris[:, 2], tris[:, 1], tris[:, 0]))
    return TriangleMesh(vertices=vertices, triangles=tris[order],
                        resolution=resolution, _qhull=qhull)


def _affine_for_triangle(dst_tri: np.ndarray, src_tri: np.ndarray) -> np.ndarray | None:
    """2x3 matrix mapping dst triangle coordinates to src, or None if the
    destination triangle is degenerate."""
    a = np.concatenate([dst_tri, np.ones((3, 1))], axis=1)
    det = np.linalg.det(a)
    if abs(det) < 1e-12:
        return None
    return np.linalg.solve(a, src_tri).T  # (2, 3) acting on (x, y, 1)


def _triangle_area(tri: np.ndarray) -> float:
    return 0.5 * abs(
        (tri[1, 0] - tri[0, 0]) * (tri[2, 1] - tri[0, 1])
        - (tri[2, 0] - tri[0, 0]) * (tri[1, 1] - tri[0, 1])
    )


def piecewise_affine_warp(img: np.ndarray, src: np.ndarray, dst: np.ndarray,
                          mesh: TriangleMesh) -> np.ndarray:
    """Warp ``img`` so geometry at ``src`` lands on ``dst``.

    ``mesh`` must be built on ``dst``; both landmark sets are augmented with
    the same fixed border anchors. Every output pixel is assigned to exactly
    one destination triangle and sampled from the source under that
    triangle's affine map. A degenerate source triangle is replaced by the
    nearest (by centroid) non-degenerate one, with a warning.
    """
    img = validate_image(img)
    src = np.asarray(src, dtype=np.float64)
    dst = np.asarray(dst, dtype=np.float64)
    if src.shape != dst.shape:
        raise StructuralError(f"src/dst landmark shapes differ: {src.shape} vs {dst.shape}")
    h, w = img.shape[:2]
    src_v = np.concatenate([src, border_anchors(mesh.resolution)])
    dst_v = mesh.vertices
    if len(src_v) != len(dst_v):
        raise StructuralError("mesh vertex count does not match the landmark set")

    xs, ys = pixel_grid(h, w)
    flat_pts = np.stack([xs.ravel(), ys.ravel()], axis=1)
    simplex = mesh.locate(flat_pts)

    qhull_tris = mesh._qhull.simplices
    src_areas = np.array([_triangle_area(src_v[tri]) for tri in qhull_tris])
    valid_ids = np.nonzero(src_areas > 1e-9)[0]
    if len(valid_ids) == 0:
        raise StructuralError("all source triangles are degenerate")
    centroids = dst_v[qhull_tris].mean(axis=1)

    def affine_for(t: int) -> np.ndarray:
        if src_areas[t] <= 1e-9:
            warnings.warn(
                f"degenerate source triangle {t}; filling from nearest valid triangle"
            )
            d2 = np.sum((centroids[valid_ids] - centroids[t]) ** 2, axis=1)
            t = int(valid_ids[np.argmin(d2)])
        aff = _affine_for_triangle(dst_v[qhull_tris[t]], src_v[qhull_tris[t]])
        if aff is None:
            raise StructuralError(f"degenerate destination triangle {t} in mesh")
        return aff

    out = np.empty_like(img)
    out_flat = out.reshape(-1, 3)
    homog = np.concatenate([flat_pts, np.ones((len(flat_pts), 1))], axis=1)
    for t in np.unique(simplex):
        sel = simplex == t
        mapped = homog[sel] @ affine_for(int(t)).T
        out_flat[sel] = bilinear_sample(img, mapped[:, 0], mapped[:, 1])
    return np.clip(out, 0.0, 1.0)


def landmark_morph(i1: np.ndarray, i2: np.ndarray, alpha: float,
                   l1: np.ndarray | None = None, l2: np.ndarray | None = None,
                   detector=None) -> np.ndarray:
    """Full landmark morph of two aligned same-size images.

    Landmarks may be passed directly; otherwise ``detector.detect`` is
    called on each image and a detection failure is reported naming the
    offending input.
    """
    i1 = validate_image(i1)
    i2 = validate_image(i2)
    if i1.shape != i2.shape:
        raise StructuralError(f"images differ in shape: {i1.shape} vs {i2.shape}")
    alpha = validate_alpha(alpha)

    def detect(img, given, label):
        if given is not None:
            return validate_landmarks(given)
        if detector is None:
            raise DataError(f"no landmarks and no detector for the {label} image")
        try:
            return validate_landmarks(detector.detect(img))
        except Exception as exc:
            raise DataError(f"landmark detection failed on the {label} image: {exc}") from exc

    l1 = detect(i1, l1, "first")
    l2 = detect(i2, l2, "second")
    avg = interpolate_landmarks(l1, l2, alpha)
    mesh = triangulate(avg, i1.shape[0])
    w1 = piecewise_affine_warp(i1, l1, avg, mesh)
    w2 = piecewise_affine_warp(i2, l2, avg, mesh)
    return np.clip((1.0 - alpha) * w1 + alpha * w2, 0.0, 1.0)
