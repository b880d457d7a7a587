from procdyn.dynamics.acrobot import AcrobotParams, AcrobotState, acrobot_step
from procdyn.dynamics.camera import (
    CAMERA_HEIGHT,
    PendulumCameraState,
    camera_position,
    pendulum_camera_step,
)
from procdyn.dynamics.diagnostics import (
    acrobot_energies,
    acrobot_pe_range,
    conserved_diagnostics,
    orbits_energies,
)
from procdyn.dynamics.fn import (
    CAMERA_FOCAL_POINT,
    POSITION_CUBE,
    SCENARIOS,
    VARIANT_TAGS,
    DynamicsFn,
    NonDifferentiableVariantError,
    UnknownVariantError,
    default_fn,
    make_variant,
)
from procdyn.dynamics.orbits import (
    DegenerateSeparationError,
    OrbitsParams,
    OrbitsState,
    orbits_accel,
    orbits_step,
)

__all__ = [
    "AcrobotParams",
    "AcrobotState",
    "acrobot_step",
    "acrobot_energies",
    "acrobot_pe_range",
    "CAMERA_FOCAL_POINT",
    "CAMERA_HEIGHT",
    "PendulumCameraState",
    "camera_position",
    "pendulum_camera_step",
    "conserved_diagnostics",
    "orbits_energies",
    "DynamicsFn",
    "DegenerateSeparationError",
    "NonDifferentiableVariantError",
    "UnknownVariantError",
    "default_fn",
    "make_variant",
    "OrbitsParams",
    "OrbitsState",
    "orbits_accel",
    "orbits_step",
    "POSITION_CUBE",
    "SCENARIOS",
    "VARIANT_TAGS",
]
