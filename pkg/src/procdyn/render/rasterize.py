"""Deterministic rasterizer: shaded sphere discs, capsule links, textured view.

Everything draws into a float RGB buffer in [0, 1] and quantizes to uint8
once at the end, so identical inputs give byte-identical frames.
"""

from dataclasses import dataclass

import numpy as np

from procdyn.render.camera import Camera, ORBITS_CAMERA, focal_px, project
from procdyn.render.texture import TEXTURE_WORLD_SIZE

# Directional light (camera space, unit length) and Lambert terms.
LIGHT_DIR = np.array([-0.45, 0.60, 0.66])
LIGHT_DIR = LIGHT_DIR / np.linalg.norm(LIGHT_DIR)
AMBIENT = 0.25
DIFFUSE = 0.75

# Vertical background gradient endpoints (top, bottom).
BG_TOP = np.array([0.080, 0.085, 0.110])
BG_BOTTOM = np.array([0.150, 0.130, 0.180])

# The frame window spans this many world units for the pendulum camera.
VIEW_WORLD_SIZE = 8.0

# Acrobot screen mapping: pixels per world unit is size / ACROBOT_VIEW; the
# pivot sits at the image center.
ACROBOT_VIEW = 5.0


@dataclass(frozen=True)
class OrbitsScene:
    colors: tuple  # ((r,g,b) in [0,1]) per object
    radii: tuple  # world units per object

    def __post_init__(self):
        if len(self.colors) != len(self.radii):
            raise ValueError("colors and radii must pair up")
        for c in self.colors:
            if not all(0.0 <= x <= 1.0 for x in c):
                raise ValueError(f"color out of range: {c}")
        for r in self.radii:
            if r <= 0:
                raise ValueError(f"radius must be positive, got {r}")


@dataclass(frozen=True)
class AcrobotScene:
    link_colors: tuple = ((0.92, 0.45, 0.20), (0.25, 0.65, 0.95))
    link_width: float = 0.09  # world units (half width)
    joint_color: tuple = (0.95, 0.92, 0.88)

    def __post_init__(self):
        if self.link_width <= 0:
            raise ValueError("link_width must be positive")


def quantize(img: np.ndarray) -> np.ndarray:
    return np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def background(size: int) -> np.ndarray:
    t = (np.arange(size) + 0.5) / size
    rows = BG_TOP[None, :] + (BG_BOTTOM - BG_TOP)[None, :] * t[:, None]
    return np.repeat(rows[:, None, :], size, axis=1)


def rotated_light(azimuth: float) -> np.ndarray:
    """LIGHT_DIR spun by azimuth radians about the view axis."""
    c, s = np.cos(azimuth), np.sin(azimuth)
    return np.array(
        [c * LIGHT_DIR[0] - s * LIGHT_DIR[1], s * LIGHT_DIR[0] + c * LIGHT_DIR[1], LIGHT_DIR[2]]
    )


def _blend_disc(img, u, v, r_px, depth, color, size, light=LIGHT_DIR):
    """Lambert-shaded sphere impostor disc with a 1 px feathered edge."""
    lo_i = max(int(np.floor(v - r_px - 1)), 0)
    hi_i = min(int(np.ceil(v + r_px + 1)) + 1, size)
    lo_j = max(int(np.floor(u - r_px - 1)), 0)
    hi_j = min(int(np.ceil(u + r_px + 1)) + 1, size)
    if lo_i >= hi_i or lo_j >= hi_j:
        return
    ii = np.arange(lo_i, hi_i)[:, None] + 0.5
    jj = np.arange(lo_j, hi_j)[None, :] + 0.5
    dx = (jj - u) / r_px
    dy = (ii - v) / r_px
    rho2 = dx * dx + dy * dy
    dist = np.sqrt(rho2) * r_px
    coverage = np.clip(r_px + 0.5 - dist, 0.0, 1.0)
    if not np.any(coverage > 0):
        return
    nz = np.sqrt(np.clip(1.0 - rho2, 0.0, 1.0))
    # camera-space normal: +x right, +y up (image rows grow downwards)
    ndotl = dx * light[0] + (-dy) * light[1] + nz * light[2]
    shade = AMBIENT + DIFFUSE * np.clip(ndotl, 0.0, None)
    tile = np.clip(shade[:, :, None] * np.asarray(color)[None, None, :], 0.0, 1.0)
    cov = coverage[:, :, None]
    img[lo_i:hi_i, lo_j:hi_j] = img[lo_i:hi_i, lo_j:hi_j] * (1 - cov) + tile * cov


def render_orbits(
    positions, scene: OrbitsScene, camera: Camera = ORBITS_CAMERA, size: int = 64,
    light_azimuth: float | None = None,
) -> np.ndarray:
    """(size, size, 3) uint8 frame from (N, 3) object positions."""
    p = np.asarray(positions, dtype=np.float64).reshape(-1, 3)
    img = background(size)
    light = LIGHT_DIR if light_azimuth is None else rotated_light(light_azimuth)
    if p.shape[0]:
        u, v, depth = project(p, camera, size, size)
        order = np.argsort(-depth, kind="stable")  # far to near (painter)
        f = focal_px(camera, size)
        for i in order:
            if depth[i] <= 0:
                continue
            r_px = f * scene.radii[i] / depth[i]
            _blend_disc(img, u[i], v[i], r_px, depth[i], scene.colors[i], size, light)
    return quantize(img)


def _blend_capsule(img, a, b, half_w_px, color, size):
    """Anti-aliased segment from a to b (pixel coords) with round caps."""
    lo_i = max(int(np.floor(min(a[1], b[1]) - half_w_px - 1)), 0)
    hi_i = min(int(np.ceil(max(a[1], b[1]) + half_w_px + 1)) + 1, size)
    lo_j = max(int(np.floor(min(a[0], b[0]) - half_w_px - 1)), 0)
    hi_j = min(int(np.ceil(max(a[0], b[0]) + half_w_px + 1)) + 1, size)
    if lo_i >= hi_i or lo_j >= hi_j:
        return
    ii = np.arange(lo_i, hi_i)[:, None] + 0.5
    jj = np.arange(lo_j, hi_j)[None, :] + 0.5
    ab = np.array([b[0] - a[0], b[1] - a[1]])
    denom = float(ab @ ab)
    px = jj - a[0]
    py = ii - a[1]
    t = np.clip((px * ab[0] + py * ab[1]) / denom, 0.0, 1.0) if denom > 0 else 0.0
    cx = px - t * ab[0]
    cy = py - t * ab[1]
    dist = np.sqrt(cx * cx + cy * cy)
    coverage = np.clip(half_w_px + 0.5 - dist, 0.0, 1.0)[:, :, None]
    tile = np.asarray(color)[None, None, :]
    img[lo_i:hi_i, lo_j:hi_j] = img[lo_i:hi_i, lo_j:hi_j] * (1 - coverage) + tile * coverage


def acrobot_points_px(theta1, theta2, l1, l2, size):
    """Pivot, elbow and tip in pixel coordinates (orthographic side view)."""
    scale = size / ACROBOT_VIEW
    cx = cy = size / 2.0
    ex = l1 * np.sin(theta1)
    ey = -l1 * np.cos(theta1)
    tx = ex + l2 * np.sin(theta1 + theta2)
    ty = ey - l2 * np.cos(theta1 + theta2)
    to_px = lambda x, y: (cx + scale * x, cy - scale * y)
    return to_px(0.0, 0.0), to_px(ex, ey), to_px(tx, ty)


def render_acrobot(state_vec, scene: AcrobotScene, params=None, size: int = 64) -> np.ndarray:
    """(size, size, 3) uint8 frame for [theta1, theta2, ...] state."""
    from procdyn.dynamics.acrobot import AcrobotParams

    params = params or AcrobotParams()
    s = np.asarray(state_vec, dtype=np.float64).reshape(-1)
    pivot, elbow, tip = acrobot_points_px(s[0], s[1], params.l1, params.l2, size)
    scale = size / ACROBOT_VIEW
    img = background(size)
    half_w = scene.link_width * scale
    _blend_capsule(img, pivot, elbow, half_w, scene.link_colors[0], size)
    _blend_capsule(img, elbow, tip, half_w, scene.link_colors[1], size)
    _blend_disc(img, pivot[0], pivot[1], half_w * 0.8, 1.0, scene.joint_color, size)
    return quantize(img)


def render_pendulum_camera(camera_pos, texture: np.ndarray, size: int = 64) -> np.ndarray:
    """Bilinear view of the tiled ground texture from camera (x, y, 10).

    The window spans VIEW_WORLD_SIZE world units; integer texel coordinates
    address texel centers, so an aligned window reduces to a pure decimated
    crop of the texture.
    """
    pos = np.asarray(camera_pos, dtype=np.float64).reshape(-1)
    tex = np.asarray(texture)
    tsize = tex.shape[0]
    texels_per_unit = tsize / TEXTURE_WORLD_SIZE
    px_per_unit = size / VIEW_WORLD_SIZE
    jj = np.arange(size)
    ii = np.arange(size)
    x = pos[0] + (jj + 0.5 - size / 2.0) / px_per_unit
    y = pos[1] + (size / 2.0 - ii - 0.5) / px_per_unit
    sx = x * texels_per_unit  # integer == texel center
    sy = -y * texels_per_unit  # texture row 0 is the +y edge
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    fx = (sx - x0)[None, :, None]
    fy = (sy - y0)[:, None, None]
    x0 %= tsize
    y0 %= tsize
    x1 = (x0 + 1) % tsize
    y1 = (y0 + 1) % tsize
    t = tex.astype(np.float64) / 255.0
    v00 = t[np.ix_(y0, x0)]
    v01 = t[np.ix_(y0, x1)]
    v10 = t[np.ix_(y1, x0)]
    v11 = t[np.ix_(y1, x1)]
    img = (
        v00 * (1 - fx) * (1 - fy)
        + v01 * fx * (1 - fy)
        + v10 * (1 - fx) * fy
        + v11 * fx * fy
    )
    return quantize(img)
