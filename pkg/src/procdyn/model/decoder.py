"""Spatial broadcast decoder; object-centric variant alpha-blends slots."""

import numpy as np

from procdyn.engine import nn, ops
from procdyn.model.config import ModelConfig
from procdyn.model.encoder import ramp_grid


def _deconv_plan(start: int, target: int, layers: int):
    """Strides for `layers` transposed convs growing start -> target."""
    strides = []
    size = start
    for _ in range(layers):
        if size < target:
            strides.append(2)
            size *= 2
        else:
            strides.append(1)
    if size != target:
        raise ValueError(f"cannot reach {target} from {start} in {layers} deconvs")
    return strides


class SpatialBroadcastDecoder(nn.Module):
    def __init__(self, rng, config: ModelConfig):
        self.config = config
        C = config.latent_dim
        res = config.broadcast_res
        ch = config.dec_channels
        k = config.dec_kernel
        self.pos_proj = nn.Linear(rng, 4, C, "decoder.pos")
        self.grid = ramp_grid(res).reshape(res * res, 4)
        strides = _deconv_plan(res, config.image_size, 4)
        self.deconvs = []
        in_ch = C
        for i, s in enumerate(strides):
            self.deconvs.append(
                nn.ConvTranspose2d(
                    rng, in_ch, ch, k, f"decoder.deconv{i}",
                    stride=s, padding=k // 2, output_padding=s - 1,
                )
            )
            in_ch = ch
        out_ch = 4 if config.object_centric else 3
        self.final = nn.Conv2d(
            rng, ch, out_ch, config.final_kernel, "decoder.final",
            stride=1, padding=config.final_kernel // 2,
        )

    def __call__(self, z):
        """z: (B*, C) -> (B*, out_ch, H, W); no output activation."""
        b, C = z.shape
        res = self.config.broadcast_res
        emb = self.pos_proj(self.grid)  # (res*res, C)
        x = ops.reshape(z, (b, 1, C))
        x = ops.tile(x, (1, res * res, 1))
        x = ops.embedding_add(x, emb)  # (B, res*res, C)
        x = ops.transpose(x, (0, 2, 1))
        x = ops.reshape(x, (b, C, res, res))
        for deconv in self.deconvs:
            x = ops.relu(deconv(x))
        return self.final(x)


def blend_slots(decoded, num_slots: int):
    """(B*K, 4, H, W) slot decodings -> (B, 3, H, W) via softmax alphas."""
    bk, ch, h, w = decoded.shape
    b = bk // num_slots
    x = ops.reshape(decoded, (b, num_slots, ch, h, w))
    rgb = x[:, :, 0:3]
    alpha = x[:, :, 3:4]
    weights = ops.softmax(alpha, axis=1)
    w3 = ops.tile(weights, (1, 1, 3, 1, 1))
    return ops.sum_(rgb * w3, axis=1), weights
