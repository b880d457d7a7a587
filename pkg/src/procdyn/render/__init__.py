from procdyn.render.camera import Camera, ORBITS_CAMERA, focal_px, project, unproject
from procdyn.render.rasterize import (
    ACROBOT_VIEW,
    AcrobotScene,
    OrbitsScene,
    VIEW_WORLD_SIZE,
    acrobot_points_px,
    background,
    quantize,
    render_acrobot,
    render_orbits,
    render_pendulum_camera,
)
from procdyn.render.texture import (
    TEXTURE_SEED,
    TEXTURE_SIZE,
    TEXTURE_WORLD_SIZE,
    generate_texture,
    load_texture,
    texture_path,
    write_texture_asset,
)

__all__ = [
    "ACROBOT_VIEW",
    "AcrobotScene",
    "Camera",
    "ORBITS_CAMERA",
    "OrbitsScene",
    "TEXTURE_SEED",
    "TEXTURE_SIZE",
    "TEXTURE_WORLD_SIZE",
    "VIEW_WORLD_SIZE",
    "acrobot_points_px",
    "background",
    "focal_px",
    "generate_texture",
    "load_texture",
    "project",
    "quantize",
    "render_acrobot",
    "render_orbits",
    "render_pendulum_camera",
    "texture_path",
    "unproject",
    "write_texture_asset",
]
