"""Index layout of the 68-point landmark convention used throughout.

Indices follow the common 68-point annotation: jaw 0-16, brows 17-26,
nose bridge 27-30 (30 = tip), nostrils 31-35, eyes 36-41 / 42-47
(viewer left / right), outer lip 48-59, inner lip 60-67.
"""

from __future__ import annotations

import numpy as np

JAW = slice(0, 17)
BROW_L = slice(17, 22)
BROW_R = slice(22, 27)
NOSE_BRIDGE = slice(27, 31)
NOSE_TIP = 30
NOSTRILS = slice(31, 36)
EYE_L = slice(36, 42)
EYE_R = slice(42, 48)
OUTER_LIP = slice(48, 60)
INNER_LIP = slice(60, 68)
MOUTH_CORNER_L = 48
MOUTH_CORNER_R = 54


def eye_centers(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return points[EYE_L].mean(axis=0), points[EYE_R].mean(axis=0)


def five_point_anchors(points: np.ndarray) -> np.ndarray:
    """Eye centers, nose tip, and mouth corners as a (5, 2) array."""
    left_eye, right_eye = eye_centers(points)
    return np.stack([
        left_eye,
        right_eye,
        points[NOSE_TIP],
        points[MOUTH_CORNER_L],
        points[MOUTH_CORNER_R],
    ])
