"""Procedurally generated parametric faces.

The repository ships no biometric data; instead, faces are rendered from a
small set of per-identity geometry and color parameters. Landmarks are laid
out analytically from the same parameters, so the rendered image and its
sidecar are always consistent. Identity parameters, pose jitter, and
illumination jitter are all drawn from seeded RNGs, making every dataset a
pure function of its seed.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, replace

import numpy as np

from . import landmarks as lm
from .geometry import Similarity, soft_convex_hull, soft_ellipse
from .images import save_image, save_landmarks


@dataclass
class FaceParams:
    """Geometry in unit-square fractions plus RGB colors in [0, 1]."""

    face_cx: float
    face_cy: float
    face_ax: float
    face_ay: float
    eye_dx: float
    eye_y: float
    eye_ax: float
    eye_ay: float
    iris_r: float
    brow_off: float
    brow_len: float
    brow_arch: float
    nose_tip_y: float
    nose_w: float
    mouth_cy: float
    mouth_ax: float
    mouth_ay: float
    hair_ay: float
    skin: tuple[float, float, float]
    hair: tuple[float, float, float]
    bg: tuple[float, float, float]
    iris: tuple[float, float, float]
    lips: tuple[float, float, float]
    # pose jitter, applied on top of the canonical layout
    rot: float = 0.0
    scale: float = 1.0
    shift_x: float = 0.0
    shift_y: float = 0.0
    illum: float = 1.0


def sample_identity(rng: np.random.Generator) -> FaceParams:
    u = rng.uniform
    skin_base = np.array([0.87, 0.72, 0.60]) * u(0.82, 1.08)
    hair = np.array([u(0.08, 0.55), u(0.05, 0.40), u(0.02, 0.30)])
    bg = np.array([u(0.55, 0.95), u(0.55, 0.95), u(0.55, 0.95)])
    iris = np.array([u(0.05, 0.45), u(0.15, 0.55), u(0.25, 0.75)])
    lips = np.array([u(0.55, 0.80), u(0.20, 0.40), u(0.25, 0.45)])
    return FaceParams(
        face_cx=0.5,
        face_cy=u(0.585, 0.615),
        face_ax=u(0.215, 0.265),
        face_ay=u(0.295, 0.345),
        eye_dx=u(0.135, 0.165),
        eye_y=u(0.450, 0.475),
        eye_ax=u(0.042, 0.058),
        eye_ay=u(0.022, 0.032),
        iris_r=u(0.016, 0.024),
        brow_off=u(0.048, 0.066),
        brow_len=u(0.085, 0.115),
        brow_arch=u(0.006, 0.016),
        nose_tip_y=u(0.625, 0.655),
        nose_w=u(0.028, 0.042),
        mouth_cy=u(0.785, 0.815),
        mouth_ax=u(0.080, 0.110),
        mouth_ay=u(0.026, 0.038),
        hair_ay=u(0.24, 0.30),
        skin=tuple(np.clip(skin_base, 0.0, 1.0)),
        hair=tuple(hair),
        bg=tuple(bg),
        iris=tuple(iris),
        lips=tuple(lips),
    )


def jitter_identity(params: FaceParams, rng: np.random.Generator,
                    pose: float = 1.0, illum: float = 1.0) -> FaceParams:
    """New params with random pose (rotation/scale/shift) and illumination."""
    return replace(
        params,
        rot=rng.uniform(-0.05, 0.05) * pose,
        scale=1.0 + rng.uniform(-0.03, 0.03) * pose,
        shift_x=rng.uniform(-0.012, 0.012) * pose,
        shift_y=rng.uniform(-0.012, 0.012) * pose,
        illum=1.0 + rng.uniform(-0.10, 0.10) * illum,
    )


def _pose_transform(params: FaceParams, resolution: int) -> Similarity:
    # rotate/scale about the image center, then shift
    r = resolution
    c = 0.5 * r
    raw = Similarity(params.scale, params.rot, 0.0, 0.0)
    center_off = np.array([c, c]) - raw.apply(np.array([[c, c]]))[0]
    return Similarity(params.scale, params.rot,
                      center_off[0] + params.shift_x * r,
                      center_off[1] + params.shift_y * r)


def _canonical_landmarks(p: FaceParams, r: int) -> np.ndarray:
    pts = np.zeros((68, 2))
    cx, cy = p.face_cx * r, p.face_cy * r
    ax, ay = p.face_ax * r, p.face_ay * r

    theta = np.pi + np.arange(17) * (np.pi / 16.0)
    pts[lm.JAW, 0] = cx + ax * np.cos(theta)
    pts[lm.JAW, 1] = cy - ay * np.sin(theta)

    for side, brow in ((-1, lm.BROW_L), (1, lm.BROW_R)):
        bx = cx + side * p.eye_dx * r
        by = (p.eye_y - p.brow_off) * r
        t = np.linspace(-0.5, 0.5, 5)
        pts[brow, 0] = bx + t * p.brow_len * r
        pts[brow, 1] = by - p.brow_arch * r * np.cos(t * np.pi)

    bridge_top = (p.eye_y + 0.02) * r
    pts[lm.NOSE_BRIDGE, 0] = cx
    pts[lm.NOSE_BRIDGE, 1] = np.linspace(bridge_top, p.nose_tip_y * r, 4)
    spread = p.nose_w * r
    pts[lm.NOSTRILS, 0] = cx + np.array([-1.0, -0.5, 0.0, 0.5, 1.0]) * spread
    pts[lm.NOSTRILS, 1] = (p.nose_tip_y + 0.022) * r

    eye_angles = np.deg2rad([180.0, 120.0, 60.0, 0.0, -60.0, -120.0])
    for side, eye in ((-1, lm.EYE_L), (1, lm.EYE_R)):
        ex = cx + side * p.eye_dx * r
        ey = p.eye_y * r
        pts[eye, 0] = ex + p.eye_ax * r * np.cos(eye_angles)
        pts[eye, 1] = ey - p.eye_ay * r * np.sin(eye_angles)

    mx, my = cx, p.mouth_cy * r
    outer_angles = np.deg2rad(180.0 - 30.0 * np.arange(12))
    pts[lm.OUTER_LIP, 0] = mx + p.mouth_ax * r * np.cos(outer_angles)
    pts[lm.OUTER_LIP, 1] = my - p.mouth_ay * r * np.sin(outer_angles)
    inner_angles = np.deg2rad(180.0 - 45.0 * np.arange(8))
    pts[lm.INNER_LIP, 0] = mx + 0.55 * p.mouth_ax * r * np.cos(inner_angles)
    pts[lm.INNER_LIP, 1] = my - 0.45 * p.mouth_ay * r * np.sin(inner_angles)
    return pts


def toy_landmarks(params: FaceParams, resolution: int) -> np.ndarray:
    pts = _canonical_landmarks(params, resolution)
    return _pose_transform(params, resolution).apply(pts)


def render_toy_face(params: FaceParams, resolution: int) -> np.ndarray:
    """Render the face described by ``params`` at ``resolution``."""
    p, r = params, resolution
    pose = _pose_transform(p, r)
    rot = p.rot
    sc = p.scale

    def at(fx: float, fy: float) -> tuple[float, float]:
        q = pose.apply(np.array([[fx * r, fy * r]]))[0]
        return float(q[0]), float(q[1])

    img = np.empty((r, r, 3))
    img[:] = np.clip(np.array(p.bg) * p.illum, 0.0, 1.0)

    def paint(mask: np.ndarray, color: np.ndarray) -> None:
        np.clip(color, 0.0, 1.0, out=color)
        img[:] = mask[..., None] * color + (1.0 - mask[..., None]) * img

    soft = max(0.5, r / 160.0)
    hair_c = at(p.face_cx, p.face_cy - 0.20)
    hair_mask = soft_ellipse(r, r, hair_c, (p.face_ax * 1.22 * r * sc, p.hair_ay * r * sc),
                             angle=rot, softness=soft)
    paint(hair_mask, np.array(p.hair) * p.illum)

    face_c = at(p.face_cx, p.face_cy)
    face_mask = soft_ellipse(r, r, face_c, (p.face_ax * r * sc, p.face_ay * r * sc),
                             angle=rot, softness=soft)
    ys = np.arange(r, dtype=np.float64)[:, None] / r
    shade = 1.0 - 0.12 * np.clip((ys - 0.5) * 2.0, 0.0, 1.0)
    skin_img = np.clip(np.array(p.skin) * p.illum, 0.0, 1.0) * shade[..., None]
    img[:] = face_mask[..., None] * skin_img + (1.0 - face_mask[..., None]) * img

    for side in (-1, 1):
        bx, by = at(p.face_cx + side * p.eye_dx, p.eye_y - p.brow_off)
        brow = soft_ellipse(r, r, (bx, by),
                            (0.5 * p.brow_len * r * sc, 0.011 * r * sc),
                            angle=rot, softness=soft)
        paint(brow, np.array(p.hair) * 0.8 * p.illum)

    for side in (-1, 1):
        ex, ey = at(p.face_cx + side * p.eye_dx, p.eye_y)
        sclera = soft_ellipse(r, r, (ex, ey), (p.eye_ax * r * sc, p.eye_ay * r * sc),
                              angle=rot, softness=soft)
        paint(sclera, np.array([0.97, 0.97, 0.97]) * p.illum)
        iris = soft_ellipse(r, r, (ex, ey), (p.iris_r * r * sc, p.iris_r * r * sc),
                            softness=soft)
        paint(iris, np.array(p.iris) * p.illum)
        pupil = soft_ellipse(r, r, (ex, ey), (0.45 * p.iris_r * r * sc,) * 2,
                             softness=soft)
        paint(pupil, np.array([0.05, 0.05, 0.05]))

    nx, ny = at(p.face_cx, (p.eye_y + 0.02 + p.nose_tip_y) / 2.0)
    ridge = soft_ellipse(r, r, (nx, ny),
                         (0.014 * r * sc, 0.5 * (p.nose_tip_y - p.eye_y - 0.02) * r * sc),
                         angle=rot, softness=soft)
    paint(ridge * 0.35, np.array(p.skin) * 0.75 * p.illum)
    for side in (-1, 1):
        hx, hy = at(p.face_cx + side * p.nose_w * 0.8, p.nose_tip_y + 0.022)
        nostril = soft_ellipse(r, r, (hx, hy), (0.010 * r * sc, 0.007 * r * sc),
                               angle=rot, softness=soft)
        paint(nostril, np.array(p.skin) * 0.45 * p.illum)

    mx, my = at(p.face_cx, p.mouth_cy)
    mouth = soft_ellipse(r, r, (mx, my), (p.mouth_ax * r * sc, p.mouth_ay * r * sc),
                         angle=rot, softness=soft)
    paint(mouth, np.array(p.lips) * p.illum)
    gap = soft_ellipse(r, r, (mx, my), (0.55 * p.mouth_ax * r * sc, 0.2 * p.mouth_ay * r * sc),
                       angle=rot, softness=soft)
    paint(gap * 0.6, np.array(p.lips) * 0.55 * p.illum)

    return np.clip(img, 0.0, 1.0)


def portrait_mask_from_params(params: FaceParams, resolution: int) -> np.ndarray:
    """Face + hair coverage of a rendered toy face (1 = portrait, 0 = background)."""
    p, r = params, resolution
    pose = _pose_transform(p, r)
    sc = p.scale
    fc = pose.apply(np.array([[p.face_cx * r, p.face_cy * r]]))[0]
    hc = pose.apply(np.array([[p.face_cx * r, (p.face_cy - 0.20) * r]]))[0]
    face = soft_ellipse(r, r, (fc[0], fc[1]), (p.face_ax * r * sc, p.face_ay * r * sc),
                        angle=p.rot, softness=1.0)
    hair = soft_ellipse(r, r, (hc[0], hc[1]), (p.face_ax * 1.22 * r * sc, p.hair_ay * r * sc),
                        angle=p.rot, softness=1.0)
    return np.clip(face + hair, 0.0, 1.0)


def landmark_portrait_mask(points: np.ndarray, resolution: int) -> np.ndarray:
    """Portrait segmentation stand-in derived from landmarks alone.

    Convex hull of jaw and brows, expanded, plus a hair dome above the eye
    line sized from the jaw width.
    """
    pts = np.asarray(points, dtype=np.float64)
    r = resolution
    jaw = pts[lm.JAW]
    brows = np.concatenate([pts[lm.BROW_L], pts[lm.BROW_R]])
    hull_pts = np.concatenate([jaw, brows])
    face = soft_convex_hull(r, r, hull_pts, softness=1.5, margin=0.015 * r)
    left_eye, right_eye = lm.eye_centers(pts)
    eye_mid = 0.5 * (left_eye + right_eye)
    jaw_w = jaw[:, 0].max() - jaw[:, 0].min()
    chin_y = jaw[:, 1].max()
    dome_c = (eye_mid[0], eye_mid[1] - 0.22 * (chin_y - eye_mid[1]))
    dome = soft_ellipse(r, r, dome_c,
                        (0.62 * jaw_w, 0.75 * (chin_y - eye_mid[1])), softness=1.5)
    return np.clip(face + dome, 0.0, 1.0)


@dataclass
class ToyDataset:
    root: str
    manifest_path: str
    records: list[tuple[str, str]]  # (identity, image path)


def make_toy_dataset(out_dir: str | os.PathLike, identities: int,
                     images_per_identity: int, resolution: int, seed: int,
                     pose_jitter: float = 1.0, illum_jitter: float = 1.0) -> ToyDataset:
    """Write a toy dataset (PNGs + landmark sidecars + manifest.csv)."""
    out_dir = os.fspath(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(seed)
    records = []
    for i in range(identities):
        ident = f"id{i:03d}"
        base = sample_identity(rng)
        for k in range(images_per_identity):
            params = jitter_identity(base, rng, pose=pose_jitter, illum=illum_jitter)
            img = render_toy_face(params, resolution)
            pts = toy_landmarks(params, resolution)
            pts = np.clip(pts, 0.0, resolution - 1e-3)
            name = f"{ident}_{k:02d}"
            img_path = os.path.join(out_dir, name + ".png")
            save_image(img_path, img)
            save_landmarks(os.path.join(out_dir, name + ".txt"), pts)
            records.append((ident, img_path))
    manifest_path = os.path.join(out_dir, "manifest.csv")
    with open(manifest_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["identity", "image"])
        writer.writerows(records)
    return ToyDataset(root=out_dir, manifest_path=manifest_path, records=records)


def toy_pair(resolution: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Two distinct-identity faces with landmarks, for tests and demos."""
    rng = np.random.default_rng(seed)
    p1 = sample_identity(rng)
    p2 = sample_identity(rng)
    return (render_toy_face(p1, resolution), toy_landmarks(p1, resolution),
            render_toy_face(p2, resolution), toy_landmarks(p2, resolution))
