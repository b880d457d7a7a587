"""Residual history predictor: small pre-LN transformer over recent latents."""

import numpy as np

from procdyn.engine import nn, ops


class MultiHeadAttention(nn.Module):
    def __init__(self, rng, dim, heads, name):
        if dim % heads:
            raise ValueError(f"dim {dim} not divisible by {heads} heads")
        self.heads = heads
        self.dim = dim
        self.q = nn.Linear(rng, dim, dim, f"{name}.q", bias=False)
        self.k = nn.Linear(rng, dim, dim, f"{name}.k", bias=False)
        self.v = nn.Linear(rng, dim, dim, f"{name}.v", bias=False)
        self.out = nn.Linear(rng, dim, dim, f"{name}.out")

    def __call__(self, x):
        # x: (B, T, C)
        b, t, c = x.shape
        h = self.heads
        d = c // h

        def split_heads(y):
            y = ops.reshape(y, (b, t, h, d))
            return ops.transpose(y, (0, 2, 1, 3))  # (B, h, T, d)

        q, k, v = split_heads(self.q(x)), split_heads(self.k(x)), split_heads(self.v(x))
        attended = ops.scaled_dot_attention(q, k, v)
        merged = ops.transpose(attended, (0, 2, 1, 3))
        return self.out(ops.reshape(merged, (b, t, c)))


class HistoryTransformer(nn.Module):
    """Temporal position embedding + pre-LN blocks; emits the newest step."""

    def __init__(self, rng, dim, out_dim, layers, heads, ffn, max_len, name="residual"):
        self.max_len = max_len
        bound = 1.0 / np.sqrt(dim)
        from procdyn.engine.tensor import Parameter

        self.pos = Parameter(
            rng.uniform(-bound, bound, size=(max_len, dim)).astype(np.float32),
            name=f"{name}.pos",
        )
        self.blocks = []
        for i in range(layers):
            self.blocks.append(
                {
                    "norm1": nn.LayerNorm(dim, f"{name}.block{i}.norm1"),
                    "attn": MultiHeadAttention(rng, dim, heads, f"{name}.block{i}.attn"),
                    "norm2": nn.LayerNorm(dim, f"{name}.block{i}.norm2"),
                    "ff1": nn.Linear(rng, dim, ffn, f"{name}.block{i}.ff1"),
                    "ff2": nn.Linear(rng, ffn, dim, f"{name}.block{i}.ff2"),
                }
            )
        self.final_norm = nn.LayerNorm(dim, f"{name}.final_norm")
        self.head = nn.Linear(rng, dim, out_dim, f"{name}.head")

    def __call__(self, x):
        """x: (B, T, C) with T <= max_len; returns (B, out_dim)."""
        b, t, c = x.shape
        if t > self.max_len:
            raise ValueError(f"history length {t} exceeds {self.max_len}")
        # right-aligned positions: index 0 is the oldest slot of a full window
        pos = self.pos[self.max_len - t :, :]
        x = ops.embedding_add(x, pos)
        for blk in self.blocks:
            x = x + blk["attn"](blk["norm1"](x))
            x = x + blk["ff2"](ops.relu(blk["ff1"](blk["norm2"](x))))
        x = self.final_norm(x)
        newest = ops.reshape(x[:, t - 1, :], (b, c))
        return self.head(newest)
