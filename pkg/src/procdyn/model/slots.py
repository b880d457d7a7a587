"""Iterative slot-attention refinement over encoded frame features."""

import numpy as np

from procdyn.engine import nn, ops
from procdyn.engine.tensor import Parameter


class SlotAttention(nn.Module):
    def __init__(self, rng, dim, num_slots, name="slots", eps=1e-8):
        self.dim = dim
        self.num_slots = num_slots
        self.eps = eps
        self.norm_inputs = nn.LayerNorm(dim, f"{name}.norm_inputs")
        self.norm_slots = nn.LayerNorm(dim, f"{name}.norm_slots")
        self.norm_mlp = nn.LayerNorm(dim, f"{name}.norm_mlp")
        self.q = nn.Linear(rng, dim, dim, f"{name}.q", bias=False)
        self.k = nn.Linear(rng, dim, dim, f"{name}.k", bias=False)
        self.v = nn.Linear(rng, dim, dim, f"{name}.v", bias=False)
        self.gru = nn.GRUCell(rng, dim, f"{name}.gru")
        self.mlp1 = nn.Linear(rng, dim, dim, f"{name}.mlp1")
        self.mlp2 = nn.Linear(rng, dim, dim, f"{name}.mlp2")
        bound = 1.0 / np.sqrt(dim)
        self.init_slots = Parameter(
            rng.uniform(-bound, bound, size=(num_slots, dim)).astype(np.float32),
            name=f"{name}.init",
        )

    def initial(self, batch: int):
        z = ops.reshape(self.init_slots, (1, self.num_slots, self.dim))
        return ops.tile(z, (batch, 1, 1))

    def __call__(self, features, slots, iterations: int):
        """features: (B, HW, C); slots: (B, K, C); returns refined slots."""
        if iterations <= 0:
            return slots
        feats = self.norm_inputs(features)
        k = self.k(feats)  # (B, HW, C)
        v = self.v(feats)
        scale = 1.0 / np.sqrt(self.dim)
        b, hw, c = features.shape
        for _ in range(iterations):
            prev = slots
            q = self.q(self.norm_slots(slots))  # (B, K, C)
            logits = ops.matmul(k, ops.transpose(q, (0, 2, 1))) * scale  # (B, HW, K)
            attn = ops.softmax(logits, axis=-1)  # competition across slots
            attn = attn + self.eps
            denom = ops.sum_(attn, axis=1, keepdims=True)  # (B, 1, K)
            weights = attn / ops.tile(denom, (1, hw, 1))
            updates = ops.matmul(ops.transpose(weights, (0, 2, 1)), v)  # (B, K, C)
            slots = self.gru(updates, prev)
            slots = slots + self.mlp2(ops.relu(self.mlp1(self.norm_mlp(slots))))
        return slots
