from procdyn.data.generate import (
    EVAL_SEED_OFFSET,
    TRAIN_SEED_OFFSET,
    GenerationConfig,
    RolloutSpec,
    build_sample,
    generate_dataset,
    load_dataset,
    paper_counts,
    render_states,
    rollout_symbolic,
    split_seed,
)
from procdyn.data.sampling import (
    MAX_SPEED,
    MIN_SEPARATION,
    POSITION_CUBE,
    SamplingError,
    light_schedule,
    sample_initial_conditions,
    scene_for_sample,
)
from procdyn.data.store import (
    ChecksumError,
    Dataset,
    DatasetSample,
    StoreError,
    decode_sample,
    encode_sample,
    read_manifest,
    sample_filename,
    write_manifest,
    write_sample,
)

__all__ = [
    "ChecksumError",
    "Dataset",
    "DatasetSample",
    "EVAL_SEED_OFFSET",
    "GenerationConfig",
    "MAX_SPEED",
    "MIN_SEPARATION",
    "POSITION_CUBE",
    "RolloutSpec",
    "SamplingError",
    "StoreError",
    "TRAIN_SEED_OFFSET",
    "build_sample",
    "decode_sample",
    "encode_sample",
    "generate_dataset",
    "light_schedule",
    "load_dataset",
    "paper_counts",
    "read_manifest",
    "render_states",
    "rollout_symbolic",
    "sample_filename",
    "sample_initial_conditions",
    "scene_for_sample",
    "split_seed",
    "write_manifest",
    "write_sample",
]
