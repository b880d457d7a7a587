"""Video prediction with procedural dynamics in the computational graph.

Subpackages:
    dynamics    -- exchangeable simulator functions (orbits, acrobot, pendulum camera)
    render      -- deterministic software rasterizer (64x64 frames)
    data        -- dataset sampling, generation and the on-disk store
    engine      -- dense tensors with reverse-mode autodiff, Adam, checkpoints
    model       -- the split-latent video predictor built on the engine
    control     -- CEM model-predictive control for the acrobot swing-up
    evaluation  -- metrics, experiment runners, reports
"""

__version__ = "0.1.0"


class ProcdynError(Exception):
    """Base class for all package errors."""
