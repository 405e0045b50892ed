"""Image and landmark sidecar I/O.

Images are float64 arrays of shape (H, W, 3) with intensities in [0, 1].
On disk they are 8-bit RGB PNGs; loading divides by 255, saving rounds
half-up. Landmarks are float64 arrays of shape (68, 2) in (x, y) pixel
coordinates and live in a plain-text sidecar next to the image: one
``x y`` pair per line, same basename, ``.txt`` extension.
"""

from __future__ import annotations

import os

import numpy as np
from PIL import Image as PILImage

from .errors import DataError, StructuralError

N_LANDMARKS = 68


def validate_image(img: np.ndarray, resolution: int | None = None) -> np.ndarray:
    """Check the (H, W, 3) float layout and the [0, 1] range; return the array."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise StructuralError(f"expected (H, W, 3) image, got shape {img.shape}")
    if resolution is not None and img.shape[:2] != (resolution, resolution):
        raise StructuralError(
            f"expected {resolution}x{resolution} image, got {img.shape[0]}x{img.shape[1]}"
        )
    if not np.isfinite(img).all():
        raise StructuralError("image contains non-finite values")
    if img.min() < 0.0 or img.max() > 1.0:
        raise StructuralError(
            f"image values outside [0, 1]: min={img.min():.4g} max={img.max():.4g}"
        )
    return img


def load_image(path: str | os.PathLike) -> np.ndarray:
    try:
        with PILImage.open(path) as im:
            arr = np.asarray(im.convert("RGB"), dtype=np.float64)
    except FileNotFoundError:
        raise DataError(f"image file not found: {path}") from None
    except Exception as exc:  # corrupt file, unsupported format
        raise DataError(f"cannot read image {path}: {exc}") from exc
    return arr / 255.0


def save_image(path: str | os.PathLike, img: np.ndarray) -> None:
    img = validate_image(img)
    # round half up so 0.5/255 boundaries are stable across platforms
    quant = np.floor(img * 255.0 + 0.5).astype(np.uint8)
    PILImage.fromarray(quant, mode="RGB").save(path, format="PNG")


def validate_landmarks(points: np.ndarray, width: int | None = None,
                       height: int | None = None) -> np.ndarray:
    points = np.asarray(points, dtype=np.float64)
    if points.shape != (N_LANDMARKS, 2):
        raise StructuralError(
            f"expected {N_LANDMARKS} (x, y) landmarks, got shape {points.shape}"
        )
    if not np.isfinite(points).all():
        raise StructuralError("landmarks contain non-finite values")
    if width is not None and height is not None:
        if (points[:, 0] < 0).any() or (points[:, 0] >= width).any() \
                or (points[:, 1] < 0).any() or (points[:, 1] >= height).any():
            raise StructuralError(
                f"landmarks outside [0, {width}) x [0, {height})"
            )
    return points


def load_landmarks(path: str | os.PathLike) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            rows = [line.split() for line in fh if line.strip()]
    except FileNotFoundError:
        raise DataError(f"landmark file not found: {path}") from None
    if len(rows) != N_LANDMARKS or any(len(r) != 2 for r in rows):
        raise DataError(
            f"landmark file {path} must have {N_LANDMARKS} 'x y' lines, got {len(rows)}"
        )
    try:
        pts = np.array([[float(x), float(y)] for x, y in rows], dtype=np.float64)
    except ValueError as exc:
        raise DataError(f"non-numeric landmark value in {path}: {exc}") from exc
    return validate_landmarks(pts)


def save_landmarks(path: str | os.PathLike, points: np.ndarray) -> None:
    points = validate_landmarks(points)
    with open(path, "w", encoding="utf-8") as fh:
        for x, y in points:
            fh.write(f"{x!r} {y!r}\n")


def sidecar_path(image_path: str | os.PathLike) -> str:
    base, _ = os.path.splitext(os.fspath(image_path))
    return base + ".txt"


class SidecarLandmarkDetector:
    """Landmark "detector" that reads the sidecar file next to an image.

    Stands in for a pretrained detector; the interface is a single
    ``detect(image_path)`` call returning a (68, 2) array.
    """

    def detect(self, image_path: str | os.PathLike) -> np.ndarray:
        return load_landmarks(sidecar_path(image_path))
