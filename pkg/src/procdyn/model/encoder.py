"""Frame encoder: conv stack plus the head for each architecture variant."""

import numpy as np

from procdyn.engine import nn, ops
from procdyn.model.config import ModelConfig


def ramp_grid(size: int) -> np.ndarray:
    """(size, size, 4) linear ramps (x, y, 1-x, 1-y) for position embedding."""
    t = (np.arange(size, dtype=np.float32) + 0.5) / size
    x = np.broadcast_to(t[None, :], (size, size))
    y = np.broadcast_to(t[:, None], (size, size))
    return np.stack([x, y, 1.0 - x, 1.0 - y], axis=-1)


class PositionEmbedding(nn.Module):
    """Projected 4-ramp grid added to a feature map."""

    def __init__(self, rng, size, channels, name):
        self.proj = nn.Linear(rng, 4, channels, f"{name}.proj")
        self.grid = ramp_grid(size).reshape(size * size, 4)

    def __call__(self, feats):
        # feats: (B, HW, C)
        emb = self.proj(self.grid)
        return ops.embedding_add(feats, emb)


class FrameEncoder(nn.Module):
    def __init__(self, rng, config: ModelConfig):
        self.config = config
        ch = config.enc_channels
        k = config.enc_kernel
        pad = k // 2
        self.convs = []
        in_ch = 3
        for i in range(config.enc_layers):
            self.convs.append(
                nn.Conv2d(rng, in_ch, ch, k, f"encoder.conv{i}", stride=1, padding=pad)
            )
            in_ch = ch
        size = config.image_size
        C = config.latent_dim
        if config.object_centric:
            self.pos = PositionEmbedding(rng, size, ch, "encoder.pos")
            self.norm = nn.LayerNorm(ch, "encoder.norm")
            self.fc1 = nn.Linear(rng, ch, C, "encoder.fc1")
            self.fc2 = nn.Linear(rng, C, C, "encoder.fc2")
        else:
            flat = ch * size * size
            self.norm = nn.LayerNorm(flat, "encoder.norm")
            self.fc1 = nn.Linear(rng, flat, C, "encoder.fc1")
            self.fc2 = nn.Linear(rng, C, C, "encoder.fc2")

    def __call__(self, frames):
        """frames: (B, H, W, 3) float32 in [0,1].

        Returns (B, C) image latents, or (B, HW, C) feature maps in the
        object-centric variant.
        """
        x = ops.transpose(frames, (0, 3, 1, 2))  # NCHW
        for conv in self.convs:
            x = ops.relu(conv(x))
        b = x.shape[0]
        size = self.config.image_size
        ch = self.config.enc_channels
        if self.config.object_centric:
            feats = ops.reshape(x, (b, ch, size * size))
            feats = ops.transpose(feats, (0, 2, 1))  # (B, HW, ch)
            feats = self.pos(feats)
            h = ops.relu(self.fc1(self.norm(feats)))
            return self.fc2(h)
        flat = ops.reshape(x, (b, ch * size * size))
        h = ops.relu(self.fc1(self.norm(flat)))
        return self.fc2(h)
