"""Dataset generation: sample, roll out, render, persist."""

import os
from dataclasses import asdict, dataclass, field

import numpy as np

from procdyn.data import sampling, store
from procdyn.dynamics import DynamicsFn, default_fn, make_variant
from procdyn.render import load_texture, render_acrobot, render_orbits, render_pendulum_camera

# Seed offsets keep the train and eval streams disjoint by construction.
TRAIN_SEED_OFFSET = 0
EVAL_SEED_OFFSET = 1_000_000


@dataclass(frozen=True)
class RolloutSpec:
    burn_in: int = 6
    train_rollout: int = 12
    eval_rollout: int = 24

    def frames(self, split: str) -> int:
        m = self.train_rollout if split == "train" else self.eval_rollout
        return self.burn_in + m


@dataclass(frozen=True)
class GenerationConfig:
    scenario: str = "orbits"
    variant: str | None = None
    train_samples: int = 10_000
    eval_samples: int = 256
    image_size: int = 64
    num_objects: int = 3
    base_seed: int = 0
    rollout: RolloutSpec = field(default_factory=RolloutSpec)
    dynamic_light: bool = False
    self_check: bool = True

    def dynamics_fn(self) -> DynamicsFn:
        fn = default_fn(self.scenario, num_objects=self.num_objects)
        if self.variant is not None:
            fn = make_variant(self.variant, fn)
        return fn


def paper_counts(scenario: str) -> tuple[int, int]:
    return {"orbits": (10_000, 256), "acrobot": (2_000, 256), "pendulum_camera": (2_000, 256)}[
        scenario
    ]


def rollout_symbolic(fn: DynamicsFn, state0_vec: np.ndarray, n_frames: int) -> np.ndarray:
    """(n_frames, state_dim): frame 0 is the initial state."""
    states = np.empty((n_frames, state0_vec.shape[-1]), dtype=np.float64)
    states[0] = state0_vec
    s = state0_vec
    for t in range(1, n_frames):
        s = fn.step(s, frame_index=t)
        states[t] = s
    return states


def render_states(
    config: GenerationConfig, seed: int, states: np.ndarray, texture=None
) -> np.ndarray:
    """(n, size, size, 3) uint8 frames for a symbolic trajectory."""
    n = states.shape[0]
    size = config.image_size
    frames = np.empty((n, size, size, 3), dtype=np.uint8)
    scene = sampling.scene_for_sample(config.scenario, seed, config.num_objects)
    fn = config.dynamics_fn()
    if config.scenario == "orbits":
        phase, rate = sampling.light_schedule(seed) if config.dynamic_light else (None, None)
        for t in range(n):
            pos = states[t].reshape(config.num_objects, 6)[:, :3]
            azimuth = None if phase is None else phase + rate * t * fn.params.frame_dt
            frames[t] = render_orbits(pos, scene, size=size, light_azimuth=azimuth)
    elif config.scenario == "acrobot":
        for t in range(n):
            frames[t] = render_acrobot(states[t], scene, params=fn.params, size=size)
    else:
        texture = texture if texture is not None else load_texture()
        for t in range(n):
            frames[t] = render_pendulum_camera(states[t][4:7], texture, size=size)
    return frames


def build_sample(config: GenerationConfig, seed: int, n_frames: int, texture=None):
    """(frames, states) for one sample seed."""
    state0 = sampling.sample_initial_conditions(
        config.scenario, seed, num_objects=config.num_objects
    )
    fn = config.dynamics_fn().for_sample(seed)
    states = rollout_symbolic(fn, state0.to_vector(), n_frames)
    frames = render_states(config, seed, states, texture=texture)
    return frames, states


def split_seed(config: GenerationConfig, split: str, index: int) -> int:
    offset = TRAIN_SEED_OFFSET if split == "train" else EVAL_SEED_OFFSET
    return config.base_seed + offset + index


def generate_dataset(config: GenerationConfig, out_dir: str) -> dict:
    """Write the dataset; returns the manifest. Manifest lands last."""
    os.makedirs(out_dir, exist_ok=True)
    texture = load_texture() if config.scenario == "pendulum_camera" else None
    checksums = {}
    counts = {"train": config.train_samples, "eval": config.eval_samples}
    for split, count in counts.items():
        n_frames = config.rollout.frames(split)
        for i in range(count):
            seed = split_seed(config, split, i)
            frames, states = build_sample(config, seed, n_frames, texture=texture)
            if config.self_check:
                _verify_regeneration(config, seed, states)
            rel = store.sample_filename(split, i)
            crc = store.write_sample(os.path.join(out_dir, rel), frames, states, seed)
            checksums[rel.replace(os.sep, "/")] = crc

    fn = config.dynamics_fn()
    manifest = {
        "format_version": store.VERSION,
        "scenario": config.scenario,
        "variant": config.variant,
        "num_objects": config.num_objects,
        "counts": counts,
        "rollout": asdict(config.rollout),
        "frame_dt": fn.frame_dt,
        "dynamics_params": _params_dict(fn),
        "image_size": config.image_size,
        "dynamic_light": config.dynamic_light,
        "base_seed": config.base_seed,
        "seed_offsets": {"train": TRAIN_SEED_OFFSET, "eval": EVAL_SEED_OFFSET},
        "state_dim": fn.state_dim,
        "sampling": {
            "position_cube": sampling.POSITION_CUBE,
            "min_separation": sampling.MIN_SEPARATION,
            "max_speed": sampling.MAX_SPEED,
        },
        "checksums": checksums,
    }
    store.write_manifest(out_dir, manifest)
    return manifest


def _params_dict(fn: DynamicsFn) -> dict:
    from dataclasses import asdict as dc_asdict

    return dc_asdict(fn.params)


def _verify_regeneration(config: GenerationConfig, seed: int, states: np.ndarray) -> None:
    """Re-step the recorded trajectory; any drift means nondeterminism."""
    fn = config.dynamics_fn().for_sample(seed)
    s = states[0]
    for t in range(1, states.shape[0]):
        s = fn.step(s, frame_index=t)
        if not np.array_equal(s, states[t]):
            raise store.StoreError(
                f"seed {seed}: regenerated state diverges at frame {t}"
            )


def load_dataset(path: str, split: str = "train") -> store.Dataset:
    return store.Dataset(path, split)
