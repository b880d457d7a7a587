"""Seeded periodic value-noise texture for the pendulum-camera background.

The lattice frequencies all divide the texture size, so the image tiles
seamlessly and the view window can wrap. The committed PNG asset is exactly
generate_texture(TEXTURE_SEED); a test pins that equality.
"""

import os

import numpy as np
from PIL import Image

TEXTURE_SIZE = 512
TEXTURE_SEED = 2024
# One texture tile spans this many world units (32 texels per unit).
TEXTURE_WORLD_SIZE = 16.0

_ASSET_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "assets")
TEXTURE_FILENAME = "background_texture.png"


def _periodic_value_noise(rng, size, cells):
    """Bilinear value noise from a periodic lattice with `cells` per side."""
    lattice = rng.uniform(0.0, 1.0, size=(cells, cells))
    scale = size // cells
    idx = np.arange(size)
    cell = idx // scale
    frac = (idx % scale) / scale
    c0 = cell % cells
    c1 = (cell + 1) % cells
    v00 = lattice[np.ix_(c0, c0)]
    v01 = lattice[np.ix_(c0, c1)]
    v10 = lattice[np.ix_(c1, c0)]
    v11 = lattice[np.ix_(c1, c1)]
    fy = frac[:, None]
    fx = frac[None, :]
    sy = fy * fy * (3 - 2 * fy)
    sx = fx * fx * (3 - 2 * fx)
    top = v00 * (1 - sx) + v01 * sx
    bot = v10 * (1 - sx) + v11 * sx
    return top * (1 - sy) + bot * sy


def generate_texture(seed: int = TEXTURE_SEED, size: int = TEXTURE_SIZE) -> np.ndarray:
    """(size, size, 3) uint8 RGB, deterministic per seed."""
    rng = np.random.default_rng(seed)
    octaves = [(8, 0.5), (16, 0.25), (32, 0.15), (64, 0.10)]
    channels = []
    for _ in range(3):
        acc = np.zeros((size, size))
        for cells, weight in octaves:
            acc += weight * _periodic_value_noise(rng, size, cells)
        channels.append(acc)
    img = np.stack(channels, axis=-1)
    # tint toward a sand-and-slate palette so channels stay distinguishable
    lo = np.array([0.18, 0.22, 0.28])
    hi = np.array([0.85, 0.78, 0.62])
    img = lo + (hi - lo) * img
    return np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def texture_path() -> str:
    return os.path.join(_ASSET_DIR, TEXTURE_FILENAME)


def write_texture_asset(path: str | None = None) -> str:
    path = path or texture_path()
    os.makedirs(os.path.dirname(path), exist_ok=True)
    Image.fromarray(generate_texture()).save(path)
    return path


def load_texture(path: str | None = None) -> np.ndarray:
    path = path or texture_path()
    if not os.path.exists(path):
        raise FileNotFoundError(
            f"texture asset missing at {path}; run write_texture_asset()"
        )
    return np.asarray(Image.open(path).convert("RGB"), dtype=np.uint8)
