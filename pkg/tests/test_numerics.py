"""Autodiff core: gradient checks, stabilized softmax, attention, checkpoints."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from claimforge.numerics import (
    CheckpointError,
    NonFiniteError,
    Rng,
    Tensor,
    backward,
    load_checkpoint,
    save_checkpoint,
    scaled_dot_attention,
    softmax,
)
from claimforge.numerics.gradcheck import (
    check_op,
    finite_difference_grad,
    op_cases,
    run_gradient_suite,
)


class TestGradientSuite:
    def test_all_ops_match_finite_differences(self):
        worst = run_gradient_suite(num_seeds=2, tol=1e-4)
        assert all(err < 1e-4 for err in worst.values())

    def test_suite_covers_at_least_fifty_cases(self):
        per_seed = len(op_cases(Rng(0, ("gradcheck",))))
        assert per_seed * 2 >= 50

    def test_three_layer_composite(self):
        rng = Rng(0, ("composite",))
        w1, w2, w3 = rng.normal((4, 6)), rng.normal((6, 6)), rng.normal((6, 2))
        x = rng.normal((3, 4))

        def build(ts):
            h = (ts[0] @ ts[1]).tanh()
            h = (h @ ts[2]).sigmoid()
            return (h @ ts[3]).sum()

        assert check_op(build, [x, w1, w2, w3]) < 1e-4


class TestSoftmax:
    def test_symmetric_pairs(self):
        np.testing.assert_allclose(softmax(Tensor([0.0, 0.0])).data, [0.5, 0.5])
        np.testing.assert_allclose(softmax(Tensor([1.0, 1.0, 1.0])).data,
                                   [1 / 3] * 3)

    def test_ln3_case(self):
        out = softmax(Tensor([0.0, math.log(3.0)])).data
        np.testing.assert_allclose(out, [0.25, 0.75], atol=1e-15)

    def test_extreme_magnitudes_normalized(self):
        for vals in ([1e4, 0.0, -1e4], [-1e4, -1e4], [1e4, 1e4, 1e4]):
            out = softmax(Tensor(vals)).data
            assert np.all(np.isfinite(out))
            assert abs(out.sum() - 1.0) < 1e-12

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(min_value=-1e4, max_value=1e4), min_size=1, max_size=8))
    def test_sums_to_one_property(self, vals):
        out = softmax(Tensor(vals)).data
        assert abs(out.sum() - 1.0) < 1e-12
        assert np.all(out >= 0)


class TestAttention:
    def test_single_key_forces_weight_one(self):
        rng = Rng(1, ("attn",))
        q, k = Tensor(rng.normal((1, 3))), Tensor(rng.normal((1, 3)))
        v = Tensor(rng.normal((1, 5)))
        out, w = scaled_dot_attention(q, k, v)
        np.testing.assert_allclose(out.data, v.data)
        np.testing.assert_allclose(w.data, [[1.0]])

    def test_identical_keys_give_column_mean(self):
        rng = Rng(2, ("attn",))
        q = Tensor(rng.normal((2, 3)))
        k = Tensor(np.tile(rng.normal((1, 3)), (4, 1)))
        v = Tensor(rng.normal((4, 5)))
        out, _ = scaled_dot_attention(q, k, v)
        np.testing.assert_allclose(out.data, np.tile(v.data.mean(0), (2, 1)),
                                   atol=1e-12)

    def test_seed0_brute_force_oracle(self):
        rng = Rng(0, ("attn-oracle",))
        q, k, v = rng.normal((2, 2)), rng.normal((2, 2)), rng.normal((2, 2))
        out, _ = scaled_dot_attention(Tensor(q), Tensor(k), Tensor(v))
        expected = np.zeros((2, 2))
        for i in range(2):
            scores = [sum(q[i][d] * k[j][d] for d in range(2)) / math.sqrt(2)
                      for j in range(2)]
            m = max(scores)
            exps = [math.exp(s - m) for s in scores]
            weights = [e / sum(exps) for e in exps]
            for d in range(2):
                expected[i, d] = sum(weights[j] * v[j][d] for j in range(2))
        np.testing.assert_allclose(out.data, expected, atol=1e-12)

    def test_rows_stochastic(self):
        rng = Rng(3, ("attn",))
        _, w = scaled_dot_attention(Tensor(rng.normal((5, 4))),
                                    Tensor(rng.normal((7, 4))),
                                    Tensor(rng.normal((7, 4))))
        np.testing.assert_allclose(w.data.sum(axis=-1), np.ones(5), atol=1e-12)


class TestBackward:
    def test_sigmoid_grad_at_zero(self):
        x = Tensor(0.0, requires_grad=True)
        x.sigmoid().backward()
        assert abs(x.grad - 0.25) < 1e-15

    def test_softmax_sum_has_zero_gradient(self):
        v = Tensor([0.3, -1.2, 2.5], requires_grad=True)
        softmax(v).sum().backward()
        np.testing.assert_allclose(v.grad, np.zeros(3), atol=1e-12)

    def test_named_parameter_map(self):
        params = {"w": Tensor([1.0, 2.0], requires_grad=True)}
        loss = (params["w"] * params["w"]).sum()
        grads = backward(loss, params)
        np.testing.assert_allclose(grads["w"], [2.0, 4.0])

    def test_unreachable_parameter_warns(self):
        params = {
            "used": Tensor([1.0], requires_grad=True),
            "orphan": Tensor([1.0], requires_grad=True),
        }
        loss = params["used"].sum()
        with pytest.warns(UserWarning, match="orphan"):
            backward(loss, params)

    def test_composite_vs_finite_differences(self):
        rng = Rng(0, ("bw",))
        x0 = rng.normal((3, 3))

        def f(xs):
            return float((Tensor(xs[0]).tanh().sigmoid() ** 2.0).sum().data)

        t = Tensor(x0, requires_grad=True)
        (t.tanh().sigmoid() ** 2.0).sum().backward()
        numeric = finite_difference_grad(f, [x0])[0]
        assert np.max(np.abs(t.grad - numeric)) < 1e-6


class TestTensorValidation:
    def test_non_finite_rejected_at_construction(self):
        with pytest.raises(NonFiniteError):
            Tensor([1.0, float("inf")])
        with pytest.raises(NonFiniteError):
            Tensor([float("nan")])


class TestCheckpoint:
    def test_roundtrip(self, tmp_path):
        rng = Rng(0, ("ckpt",))
        tensors = {
            "a/b": rng.normal((3, 4)),
            "c": rng.normal((5,)),
            "scalar": np.array(2.5),
        }
        path = tmp_path / "m.ckpt"
        save_checkpoint(path, tensors)
        loaded = load_checkpoint(path)
        assert set(loaded) == set(tensors)
        for name in tensors:
            # storage is 32-bit float; values survive at that precision
            np.testing.assert_allclose(loaded[name], tensors[name], atol=1e-6)
            assert loaded[name].shape == tensors[name].shape

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.ckpt"
        path.write_bytes(b"NOTIT\nrest")
        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_truncated_payload_rejected(self, tmp_path):
        path = tmp_path / "m.ckpt"
        save_checkpoint(path, {"w": np.ones((4, 4))})
        data = path.read_bytes()
        path.write_bytes(data[:-8])
        with pytest.raises(CheckpointError):
            load_checkpoint(path)


class TestRng:
    def test_same_seed_bit_identical(self):
        a = Rng(7, ("x",)).normal((4, 4))
        b = Rng(7, ("x",)).normal((4, 4))
        assert np.array_equal(a, b)

    def test_substreams_differ(self):
        root = Rng(7, ())
        a = root.substream("alpha").normal((8,))
        b = root.substream("beta").normal((8,))
        assert not np.array_equal(a, b)

    def test_different_seeds_differ(self):
        assert not np.array_equal(Rng(0, ("x",)).normal((8,)),
                                  Rng(1, ("x",)).normal((8,)))
