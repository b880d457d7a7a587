"""On-disk dataset: a json manifest plus one binary blob per sample.

Blob layout (little endian): magic b"VPRO", u32 version, u32 n_frames,
u32 height, u32 width, u32 state_dim, u64 sample seed, then raw u8 frames
(n*H*W*3) and f64 states (n*state_dim). The manifest records a CRC32 per
blob; readers verify lazily on access.
"""

import json
import os
import struct
import tempfile
import zlib
from dataclasses import dataclass

import numpy as np

from procdyn import ProcdynError

MAGIC = b"VPRO"
VERSION = 1
MANIFEST_NAME = "manifest.json"


class StoreError(ProcdynError):
    pass


class ChecksumError(StoreError):
    pass


@dataclass
class DatasetSample:
    frames: np.ndarray  # (N, H, W, 3) uint8
    states: np.ndarray  # (N, state_dim) float64
    seed: int
    scenario: str
    variant: str | None
    index: int


def encode_sample(frames: np.ndarray, states: np.ndarray, seed: int) -> bytes:
    frames = np.ascontiguousarray(frames, dtype=np.uint8)
    states = np.ascontiguousarray(states, dtype=np.float64)
    n, h, w, c = frames.shape
    if c != 3:
        raise StoreError(f"frames must be RGB, got {frames.shape}")
    if states.shape[0] != n:
        raise StoreError(f"{n} frames but {states.shape[0]} states")
    head = MAGIC + struct.pack(
        "<IIIIIQ", VERSION, n, h, w, states.shape[1], int(seed)
    )
    return head + frames.tobytes() + states.astype("<f8").tobytes()


def decode_sample(raw: bytes):
    if raw[:4] != MAGIC:
        raise StoreError("bad magic; not a sample blob")
    version, n, h, w, sdim, seed = struct.unpack("<IIIIIQ", raw[4:32])
    if version != VERSION:
        raise StoreError(f"sample version {version}, expected {VERSION}")
    frame_bytes = n * h * w * 3
    state_bytes = n * sdim * 8
    if len(raw) != 32 + frame_bytes + state_bytes:
        raise StoreError(
            f"truncated sample: {len(raw)} bytes, expected {32 + frame_bytes + state_bytes}"
        )
    frames = np.frombuffer(raw, dtype=np.uint8, count=frame_bytes, offset=32).reshape(
        n, h, w, 3
    )
    states = np.frombuffer(
        raw, dtype="<f8", count=n * sdim, offset=32 + frame_bytes
    ).reshape(n, sdim)
    return frames.copy(), states.astype(np.float64), int(seed)


def write_sample(path: str, frames, states, seed: int) -> int:
    """Atomic write (temp + rename); returns the blob's CRC32."""
    raw = encode_sample(frames, states, seed)
    crc = zlib.crc32(raw)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(raw)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return crc


def sample_filename(split: str, index: int) -> str:
    return os.path.join(split, f"sample_{index:06d}.bin")


def write_manifest(root: str, manifest: dict) -> None:
    path = os.path.join(root, MANIFEST_NAME)
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=1, sort_keys=True)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def read_manifest(root: str) -> dict:
    path = os.path.join(root, MANIFEST_NAME)
    if not os.path.exists(path):
        raise StoreError(f"no manifest at {path}")
    with open(path, encoding="utf-8") as f:
        manifest = json.load(f)
    if manifest.get("format_version") != VERSION:
        raise StoreError(
            f"manifest format_version {manifest.get('format_version')}, expected {VERSION}"
        )
    return manifest


class Dataset:
    """Lazy reader over one split; verifies checksums on access."""

    def __init__(self, root: str, split: str = "train"):
        self.root = root
        self.split = split
        self.manifest = read_manifest(root)
        self.count = self.manifest["counts"][split]
        self._checksums = self.manifest["checksums"]

    def __len__(self):
        return self.count

    @property
    def scenario(self):
        return self.manifest["scenario"]

    def __getitem__(self, index: int) -> DatasetSample:
        if not 0 <= index < self.count:
            raise IndexError(index)
        rel = sample_filename(self.split, index)
        path = os.path.join(self.root, rel)
        with open(path, "rb") as f:
            raw = f.read()
        want = self._checksums[rel.replace(os.sep, "/")]
        got = zlib.crc32(raw)
        if got != want:
            raise ChecksumError(f"{rel}: crc32 {got:#010x} != manifest {want:#010x}")
        frames, states, seed = decode_sample(raw)
        return DatasetSample(
            frames=frames,
            states=states,
            seed=seed,
            scenario=self.manifest["scenario"],
            variant=self.manifest.get("variant"),
            index=index,
        )

    def __iter__(self):
        for i in range(self.count):
            yield self[i]

    def shuffled_indices(self, seed: int) -> np.ndarray:
        """Deterministic permutation of the split."""
        return np.random.default_rng(int(seed)).permutation(self.count)
