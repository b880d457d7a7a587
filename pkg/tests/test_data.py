import os
import zlib

import numpy as np
import pytest

from procdyn.data import (
    ChecksumError,
    Dataset,
    GenerationConfig,
    RolloutSpec,
    StoreError,
    build_sample,
    decode_sample,
    encode_sample,
    generate_dataset,
    light_schedule,
    load_dataset,
    render_states,
    sample_initial_conditions,
    scene_for_sample,
    split_seed,
)
from procdyn.data.sampling import MIN_SEPARATION


def tiny_config(**kw):
    defaults = dict(
        scenario="orbits",
        train_samples=3,
        eval_samples=2,
        image_size=32,
        base_seed=41,
        rollout=RolloutSpec(burn_in=3, train_rollout=4, eval_rollout=5),
        self_check=True,
    )
    defaults.update(kw)
    return GenerationConfig(**defaults)


class TestSampling:
    def test_same_seed_same_state(self):
        a = sample_initial_conditions("orbits", 7)
        b = sample_initial_conditions("orbits", 7)
        np.testing.assert_array_equal(a.positions, b.positions)
        np.testing.assert_array_equal(a.velocities, b.velocities)

    def test_separation_constraint_holds(self):
        for seed in range(300):
            st = sample_initial_conditions("orbits", seed)
            d = np.linalg.norm(
                st.positions[:, None] - st.positions[None, :], axis=-1
            )
            assert d[np.triu_indices(3, 1)].min() >= MIN_SEPARATION

    def test_velocity_mean_near_zero(self):
        # standard error of a uniform ball component over n draws
        vs = np.array(
            [sample_initial_conditions("orbits", s).velocities for s in range(2000)]
        ).reshape(-1, 3)
        se = vs.std() / np.sqrt(len(vs))
        assert np.abs(vs.mean(axis=0)).max() < 3.5 * se + 1e-3

    def test_speed_bounded(self):
        for seed in range(100):
            st = sample_initial_conditions("orbits", seed)
            assert np.linalg.norm(st.velocities, axis=1).max() <= 1.0 + 1e-12

    def test_acrobot_ranges(self):
        st = sample_initial_conditions("acrobot", 3)
        vec = st.to_vector()
        assert np.all(np.abs(vec[:2]) <= np.pi)
        assert np.all(np.abs(vec[2:]) <= 1.0)

    def test_pendulum_camera_mount_consistent(self):
        st = sample_initial_conditions("pendulum_camera", 3)
        from procdyn.dynamics import AcrobotParams, camera_position

        expected = np.asarray(
            camera_position(
                np.float64(st.acrobot.theta1), np.float64(st.acrobot.theta2), AcrobotParams()
            )
        )
        np.testing.assert_array_equal(st.camera_pos, expected)

    def test_scene_deterministic_and_distinct(self):
        a = scene_for_sample("orbits", 11)
        b = scene_for_sample("orbits", 11)
        c = scene_for_sample("orbits", 12)
        assert a.colors == b.colors and a.radii == b.radii
        assert a.colors != c.colors

    def test_light_schedule_deterministic(self):
        assert light_schedule(5) == light_schedule(5)
        assert light_schedule(5) != light_schedule(6)


class TestBlobFormat:
    def test_roundtrip_bit_exact(self):
        rng = np.random.default_rng(0)
        frames = rng.integers(0, 256, size=(4, 8, 8, 3), dtype=np.uint8)
        states = rng.normal(size=(4, 18))
        raw = encode_sample(frames, states, seed=99)
        f2, s2, seed = decode_sample(raw)
        np.testing.assert_array_equal(f2, frames)
        np.testing.assert_array_equal(s2, states)
        assert seed == 99

    def test_truncated_blob_rejected(self):
        frames = np.zeros((2, 4, 4, 3), dtype=np.uint8)
        raw = encode_sample(frames, np.zeros((2, 6)), seed=1)
        with pytest.raises(StoreError, match="truncated"):
            decode_sample(raw[:-8])

    def test_bad_magic_rejected(self):
        with pytest.raises(StoreError, match="magic"):
            decode_sample(b"NOPE" + b"\x00" * 64)


class TestGeneration:
    def test_generate_load_roundtrip(self, tmp_path):
        config = tiny_config()
        manifest = generate_dataset(config, str(tmp_path))
        assert manifest["counts"] == {"train": 3, "eval": 2}
        train = load_dataset(str(tmp_path), "train")
        assert len(train) == 3
        sample = train[0]
        assert sample.frames.shape == (7, 32, 32, 3)  # 3 burn-in + 4 rollout
        assert sample.states.shape == (7, 18)
        ev = load_dataset(str(tmp_path), "eval")
        assert ev[0].frames.shape == (8, 32, 32, 3)

    def test_read_equals_written_bits(self, tmp_path):
        config = tiny_config()
        generate_dataset(config, str(tmp_path))
        seed = split_seed(config, "train", 1)
        frames, states = build_sample(config, seed, config.rollout.frames("train"))
        sample = load_dataset(str(tmp_path), "train")[1]
        np.testing.assert_array_equal(sample.frames, frames)
        np.testing.assert_array_equal(sample.states, states)
        assert sample.seed == seed

    def test_dynamics_coherence(self, tmp_path):
        config = tiny_config()
        generate_dataset(config, str(tmp_path))
        fn = config.dynamics_fn()
        for sample in load_dataset(str(tmp_path), "train"):
            s = sample.states[0]
            for t in range(1, sample.states.shape[0]):
                s = fn.step(s, frame_index=t)
                np.testing.assert_array_equal(s, sample.states[t])

    def test_frame_coherence_rerender(self, tmp_path):
        config = tiny_config()
        generate_dataset(config, str(tmp_path))
        sample = load_dataset(str(tmp_path), "eval")[0]
        seed = split_seed(config, "eval", 0)
        frames = render_states(config, seed, sample.states)
        np.testing.assert_array_equal(frames, sample.frames)

    def test_checksum_failure_names_sample(self, tmp_path):
        config = tiny_config()
        generate_dataset(config, str(tmp_path))
        victim = tmp_path / "train" / "sample_000002.bin"
        raw = bytearray(victim.read_bytes())
        raw[100] ^= 0xFF
        victim.write_bytes(bytes(raw))
        ds = load_dataset(str(tmp_path), "train")
        with pytest.raises(ChecksumError, match="sample_000002"):
            ds[2]

    def test_train_eval_seeds_disjoint(self, tmp_path):
        config = tiny_config()
        generate_dataset(config, str(tmp_path))
        train_seeds = {s.seed for s in load_dataset(str(tmp_path), "train")}
        eval_seeds = {s.seed for s in load_dataset(str(tmp_path), "eval")}
        assert not (train_seeds & eval_seeds)

    def test_shuffled_iteration_deterministic(self, tmp_path):
        config = tiny_config()
        generate_dataset(config, str(tmp_path))
        ds = load_dataset(str(tmp_path), "train")
        a = ds.shuffled_indices(3)
        b = ds.shuffled_indices(3)
        np.testing.assert_array_equal(a, b)
        assert sorted(a.tolist()) == [0, 1, 2]

    def test_variant_dataset_generates(self, tmp_path):
        config = tiny_config(variant="E", train_samples=1, eval_samples=1)
        generate_dataset(config, str(tmp_path))
        sample = load_dataset(str(tmp_path), "train")[0]
        # straight-line check across stored states
        per = sample.states.reshape(sample.states.shape[0], 3, 6)
        v0 = per[0, :, 3:]
        np.testing.assert_array_equal(per[-1, :, 3:], v0)

    def test_dynamic_light_changes_frames(self, tmp_path):
        base = tiny_config(train_samples=1, eval_samples=1)
        lit = tiny_config(train_samples=1, eval_samples=1, dynamic_light=True)
        generate_dataset(base, str(tmp_path / "a"))
        generate_dataset(lit, str(tmp_path / "b"))
        a = load_dataset(str(tmp_path / "a"), "train")[0]
        b = load_dataset(str(tmp_path / "b"), "train")[0]
        assert not np.array_equal(a.frames, b.frames)

    def test_pendulum_camera_generation(self, tmp_path):
        config = tiny_config(scenario="pendulum_camera", train_samples=1, eval_samples=1)
        generate_dataset(config, str(tmp_path))
        sample = load_dataset(str(tmp_path), "train")[0]
        assert sample.states.shape[1] == 7
        # camera z stays at the fixed mount height
        np.testing.assert_array_equal(sample.states[:, 6], np.full(7, 10.0))
