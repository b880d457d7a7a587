"""Pinhole camera and perspective projection.

Pixel convention: pixel (i, j) covers [j, j+1) x [i, i+1) with its center at
(j + 0.5, i + 0.5); continuous image coordinates (u, v) put the optical
axis at (W/2, H/2). v grows downward.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Camera:
    position: tuple = (0.0, 0.0, 14.0)
    look_at: tuple = (0.0, 0.0, 0.0)
    fov: float = 0.7  # vertical, radians
    up: tuple = (0.0, 1.0, 0.0)

    def __post_init__(self):
        if not (0.0 < self.fov < np.pi):
            raise ValueError(f"fov must be in (0, pi), got {self.fov}")
        if np.allclose(self.position, self.look_at):
            raise ValueError("camera position equals look_at")

    def basis(self):
        pos = np.asarray(self.position, dtype=np.float64)
        fwd = np.asarray(self.look_at, dtype=np.float64) - pos
        fwd = fwd / np.linalg.norm(fwd)
        right = np.cross(fwd, np.asarray(self.up, dtype=np.float64))
        right = right / np.linalg.norm(right)
        up = np.cross(right, fwd)
        return pos, right, up, fwd


# Fixed scene camera for the orbits renderer; its look-at point doubles as
# the focal point that variant D attracts objects to.
ORBITS_CAMERA = Camera()


def focal_px(camera: Camera, height: int) -> float:
    return (height / 2.0) / np.tan(camera.fov / 2.0)


def project(point, camera: Camera, width: int, height: int):
    """(u, v, depth) image coordinates; depth <= 0 means behind the camera.

    Accepts (3,) or (N, 3); returns arrays of matching leading shape.
    """
    p = np.asarray(point, dtype=np.float64)
    squeeze = p.ndim == 1
    p = np.atleast_2d(p)
    pos, right, up, fwd = camera.basis()
    rel = p - pos
    x = rel @ right
    y = rel @ up
    depth = rel @ fwd
    f = focal_px(camera, height)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = width / 2.0 + f * x / depth
        v = height / 2.0 - f * y / depth
    if squeeze:
        return float(u[0]), float(v[0]), float(depth[0])
    return u, v, depth


def unproject(u, v, depth, camera: Camera, width: int, height: int):
    """Inverse of project for a known positive depth."""
    pos, right, up, fwd = camera.basis()
    f = focal_px(camera, height)
    x = (np.asarray(u) - width / 2.0) * depth / f
    y = -(np.asarray(v) - height / 2.0) * depth / f
    return pos + x * right + y * up + depth * fwd
