"""Versioned binary checkpoints: json header table + raw little-endian data.

Layout: magic b"PDCK", u32 version, u64 header length, UTF-8 json header,
then the concatenated raw arrays. The header carries the parameter table
(name, dtype, shape, offset, nbytes, lr_scale), optimizer state entries
referencing the same blob region, and free-form metadata.
"""

import json
import os
import struct
import tempfile

import numpy as np

from procdyn import ProcdynError
from procdyn.engine.optim import Adam
from procdyn.engine.tensor import Parameter

MAGIC = b"PDCK"
VERSION = 1


class CheckpointError(ProcdynError):
    pass


def _np_dtype(name):
    if name not in ("float32", "float64"):
        raise CheckpointError(f"unsupported dtype {name!r}")
    return np.dtype(name).newbyteorder("<")


def save_checkpoint(path, params, optimizer: Adam | None = None, metadata=None):
    entries = []
    blobs = []
    offset = 0

    def push(name, arr, kind, lr_scale=1.0, step=0):
        nonlocal offset
        arr = np.asarray(arr)
        le = arr.astype(arr.dtype.newbyteorder("<"), copy=False)
        raw = le.tobytes()
        entries.append(
            {
                "name": name,
                "kind": kind,
                "dtype": str(arr.dtype),
                "shape": list(arr.shape),
                "offset": offset,
                "nbytes": len(raw),
                "lr_scale": lr_scale,
                "step": step,
            }
        )
        blobs.append(raw)
        offset += len(raw)

    for p in params:
        push(p.name, p.data, "param", lr_scale=p.lr_scale)
    if optimizer is not None:
        for p in params:
            st = optimizer.state[p.name]
            push(p.name, st["m"], "adam_m", step=st["step"])
            push(p.name, st["v"], "adam_v", step=st["step"])

    header = {
        "entries": entries,
        "optimizer": None
        if optimizer is None
        else {
            "lr": optimizer.lr,
            "betas": [optimizer.beta1, optimizer.beta2],
            "eps": optimizer.eps,
            "clip_norm": optimizer.clip_norm,
        },
        "metadata": metadata or {},
    }
    header_bytes = json.dumps(header).encode("utf-8")

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(MAGIC)
            f.write(struct.pack("<I", VERSION))
            f.write(struct.pack("<Q", len(header_bytes)))
            f.write(header_bytes)
            for raw in blobs:
                f.write(raw)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def load_checkpoint(path):
    """Returns (params: dict name->Parameter, adam_state: dict, metadata)."""
    with open(path, "rb") as f:
        if f.read(4) != MAGIC:
            raise CheckpointError(f"{path}: not a checkpoint file")
        (version,) = struct.unpack("<I", f.read(4))
        if version != VERSION:
            raise CheckpointError(f"{path}: version {version}, expected {VERSION}")
        (hlen,) = struct.unpack("<Q", f.read(8))
        header = json.loads(f.read(hlen).decode("utf-8"))
        blob = f.read()

    params = {}
    adam_state = {}
    for e in header["entries"]:
        raw = blob[e["offset"] : e["offset"] + e["nbytes"]]
        if len(raw) != e["nbytes"]:
            raise CheckpointError(f"{path}: truncated blob for {e['name']}")
        arr = np.frombuffer(raw, dtype=_np_dtype(e["dtype"])).reshape(e["shape"])
        arr = arr.astype(np.dtype(e["dtype"]))  # native byte order, writable
        if e["kind"] == "param":
            params[e["name"]] = Parameter(
                arr, name=e["name"], lr_scale=e["lr_scale"], dtype=arr.dtype
            )
        else:
            st = adam_state.setdefault(e["name"], {"step": e["step"]})
            st["m" if e["kind"] == "adam_m" else "v"] = arr.astype(np.float64)
            st["step"] = e["step"]
    return params, adam_state, header.get("metadata", {})


def restore_into(optimizer: Adam, adam_state) -> None:
    for name, st in adam_state.items():
        if name in optimizer.state:
            optimizer.state[name]["m"] = st["m"]
            optimizer.state[name]["v"] = st["v"]
            optimizer.state[name]["step"] = st["step"]
