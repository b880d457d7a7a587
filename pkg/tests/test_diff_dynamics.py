import numpy as np
import pytest

from procdyn.dynamics import AcrobotParams, OrbitsParams, OrbitsState, default_fn, make_variant
from procdyn.engine import Tensor, differentiable_step, numeric_grad, relative_error, rollout_states


def random_state_vec(rng, n=3):
    while True:
        p = rng.uniform(-2.5, 2.5, size=(n, 3))
        d = np.linalg.norm(p[:, None] - p[None, :], axis=-1)
        if d[np.triu_indices(n, 1)].min() >= 1.0:
            break
    v = rng.uniform(-1, 1, size=(n, 3))
    return OrbitsState(p, v).to_vector()


class TestForwardEquality:
    def test_orbits_forward_is_bit_identical(self):
        rng = np.random.default_rng(0)
        fn = default_fn("orbits")
        vec = random_state_vec(rng)
        plain = fn.step(vec, frame_index=1)
        diff = differentiable_step(fn, Tensor(vec, requires_grad=True), frame_index=1)
        np.testing.assert_array_equal(diff.data, plain)

    def test_acrobot_forward_is_bit_identical(self):
        fn = default_fn("acrobot")
        vec = np.array([0.4, -0.3, 0.8, -0.2])
        plain = fn.step(vec, torque=1.25)
        diff = differentiable_step(fn, Tensor(vec, requires_grad=True), torque=1.25)
        np.testing.assert_array_equal(diff.data, plain)

    def test_pendulum_camera_forward_is_bit_identical(self):
        fn = default_fn("pendulum_camera")
        from procdyn.dynamics import AcrobotState, PendulumCameraState

        state = PendulumCameraState.from_angles(AcrobotState(0.4, -0.3, 0.8, -0.2), fn.params)
        vec = state.to_vector()
        plain = fn.step(vec)
        diff = differentiable_step(fn, Tensor(vec, requires_grad=True))
        np.testing.assert_array_equal(diff.data, plain)


class TestStateJacobian:
    def test_zero_force_position_velocity_coupling(self):
        # Single object: dp_next/dv = dt * I exactly (no force).
        fn = default_fn("orbits", num_objects=1, substeps=1)
        vec = np.array([0.0, 0.0, 0.0, 1.0, 2.0, 3.0])
        for axis in range(3):
            s = Tensor(vec, requires_grad=True)
            out = differentiable_step(fn, s)
            out[axis].backward()
            expected = np.zeros(6)
            expected[axis] = 1.0  # dp/dp = I
            expected[3 + axis] = fn.params.dt  # dp/dv = dt
            np.testing.assert_allclose(s.grad, expected, atol=1e-15)

    def test_orbits_state_gradient_matches_fd(self):
        rng = np.random.default_rng(7)
        fn = default_fn("orbits")
        vec = random_state_vec(rng)
        w = rng.normal(size=18)

        s = Tensor(vec, requires_grad=True)
        (differentiable_step(fn, s, frame_index=1) * w).sum().backward()
        fd = numeric_grad(
            lambda v: float(np.dot(fn.step(v, frame_index=1), w)), [vec], 0
        )
        assert relative_error(s.grad, fd) < 1e-4

    def test_acrobot_state_and_torque_gradients(self):
        rng = np.random.default_rng(11)
        fn = default_fn("acrobot")
        vec = np.array([0.5, -1.0, 0.3, 0.7])
        w = rng.normal(size=4)

        s = Tensor(vec, requires_grad=True)
        tau = Tensor(np.asarray(0.8), requires_grad=True)
        (differentiable_step(fn, s, torque=tau) * w).sum().backward()
        fd_s = numeric_grad(
            lambda v, t: float(np.dot(fn.step(v, torque=float(t)), w)), [vec, 0.8], 0
        )
        fd_t = numeric_grad(
            lambda v, t: float(np.dot(fn.step(v, torque=float(t)), w)), [vec, 0.8], 1
        )
        assert relative_error(s.grad, fd_s) < 1e-4
        assert relative_error(tau.grad, fd_t) < 1e-4


class TestConstantGradients:
    def test_gradient_wrt_g_matches_fd(self):
        rng = np.random.default_rng(13)
        fn = default_fn("orbits")
        vec = random_state_vec(rng)
        w = rng.normal(size=18)

        g = Tensor(np.asarray(7.0), requires_grad=True)
        (differentiable_step(fn, Tensor(vec), frame_index=1, g=g) * w).sum().backward()
        fd = numeric_grad(
            lambda gv: float(
                np.dot(fn.step(vec, frame_index=1, g=float(gv)), w)
            ),
            [7.0],
            0,
        )
        assert relative_error(g.grad, fd, floor=1e-6) < 1e-5

    def test_gradient_wrt_mass_is_structurally_zero(self):
        # The force carries one factor of m and acceleration divides by m,
        # so d(state)/dm is identically zero; both sides are O(roundoff).
        rng = np.random.default_rng(17)
        fn = default_fn("orbits")
        vec = random_state_vec(rng)

        m = Tensor(np.asarray(1.0), requires_grad=True)
        differentiable_step(fn, Tensor(vec), frame_index=1, mass=m).sum().backward()
        fd = numeric_grad(
            lambda mv: float(np.sum(fn.step(vec, frame_index=1, mass=float(mv)))),
            [1.0],
            0,
        )
        assert relative_error(m.grad, fd, floor=1e-6) < 1e-4
        assert abs(m.grad) < 1e-10

    def test_multi_frame_rollout_g_gradient(self):
        rng = np.random.default_rng(19)
        fn = default_fn("orbits")
        vec = random_state_vec(rng)
        w = rng.normal(size=18)

        def loss_for(gv):
            s = vec
            acc = 0.0
            for k in range(3):
                s = fn.step(s, frame_index=k + 1, g=float(gv))
                acc += float(np.dot(s, w))
            return acc

        g = Tensor(np.asarray(7.0), requires_grad=True)
        total = None
        for s in rollout_states(fn, vec, 3, g=g):
            term = (s * w).sum()
            total = term if total is None else total + term
        total.backward()
        fd = numeric_grad(loss_for, [7.0], 0)
        assert relative_error(g.grad, fd, floor=1e-6) < 1e-4


class TestVariantDifferentiability:
    def test_variant_g_and_h_raise_on_tensors(self):
        from procdyn.dynamics import NonDifferentiableVariantError

        base = default_fn("orbits")
        state = Tensor(random_state_vec(np.random.default_rng(23)), requires_grad=True)
        for tag in ("G", "H"):
            fn = make_variant(tag, base).for_sample(5)
            with pytest.raises(NonDifferentiableVariantError):
                differentiable_step(fn, state, frame_index=1)

    def test_variant_e_is_differentiable(self):
        base = default_fn("orbits")
        fn = make_variant("E", base)
        s = Tensor(random_state_vec(np.random.default_rng(29)), requires_grad=True)
        out = differentiable_step(fn, s, frame_index=1)
        out.sum().backward()
        assert s.grad is not None
