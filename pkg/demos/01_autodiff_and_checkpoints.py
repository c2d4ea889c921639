"""Autodiff foundations: build a graph, take gradients, round-trip a checkpoint.

Everything downstream (similarity, generation, evaluation) trains through the
same float64 reverse-mode engine shown here.
"""

import tempfile
from pathlib import Path

import numpy as np

from claimforge.numerics import Rng, Tensor, backward
from claimforge.numerics.checkpoint import load_checkpoint, save_checkpoint
from claimforge.numerics.gradcheck import check_op
from claimforge.numerics.tensor import softmax


def main():
    rng = Rng(0, ("demo-autodiff",))

    # a small composite: softmax cross-entropy style reduction
    w = Tensor(rng.normal((4, 3)), requires_grad=True)
    x = Tensor(rng.normal((2, 4)))
    logits = x @ w
    probs = softmax(logits)
    loss = (probs * probs).sum()
    grads = backward(loss, {"w": w})
    print("loss:", float(loss.data))
    print("grad w (first row):", np.round(grads["w"][0], 4))

    # the same gradient, checked against central finite differences
    err = check_op(lambda ts: softmax(Tensor(x.data) @ ts[0]).sum(), [w.data])
    print(f"finite-difference relative error: {err:.2e}")

    # checkpoints are plain manifests + little-endian float32 blobs
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "demo.ckpt"
        save_checkpoint(path, {"w": w.data})
        restored = load_checkpoint(path)
        print("checkpoint max abs error (f32 narrowing):",
              float(np.max(np.abs(restored["w"] - w.data))))


if __name__ == "__main__":
    main()
