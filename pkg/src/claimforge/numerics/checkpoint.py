"""Named-tensor checkpoint archive.

Layout: a text manifest followed by raw little-endian float32 arrays.

    CFKP1
    <entry count>
    <name>\t<comma-joined shape>\t<byte offset into blob>
    ...
    (blank line)
    <raw f32 data>

Internal math is float64; serialization narrows to float32 for compact
artifacts, so save/load round-trips are exact only at float32 precision.
"""

from __future__ import annotations

import numpy as np

MAGIC = "CFKP1"


class CheckpointError(ValueError):
    """Malformed or version-incompatible checkpoint file."""


def save_checkpoint(path, tensors: dict[str, np.ndarray]) -> None:
    manifest = [MAGIC, str(len(tensors))]
    blobs = []
    offset = 0
    for name in sorted(tensors):
        arr = np.asarray(tensors[name], dtype="<f4", order="C")
        shape = ",".join(str(d) for d in arr.shape)
        manifest.append(f"{name}\t{shape}\t{offset}")
        blobs.append(arr.tobytes())
        offset += arr.nbytes
    header = ("\n".join(manifest) + "\n\n").encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(header)
        for blob in blobs:
            fh.write(blob)


def load_checkpoint(path) -> dict[str, np.ndarray]:
    with open(path, "rb") as fh:
        raw = fh.read()
    sep = raw.find(b"\n\n")
    if sep < 0:
        raise CheckpointError("missing manifest terminator")
    lines = raw[:sep].decode("utf-8").split("\n")
    if not lines or lines[0] != MAGIC:
        raise CheckpointError(f"bad magic header: expected {MAGIC!r}")
    try:
        count = int(lines[1])
    except (IndexError, ValueError) as exc:
        raise CheckpointError("bad entry count") from exc
    if len(lines) != 2 + count:
        raise CheckpointError(f"manifest declares {count} entries, found {len(lines) - 2}")
    blob = raw[sep + 2:]
    out: dict[str, np.ndarray] = {}
    for line in lines[2:]:
        try:
            name, shape_s, offset_s = line.split("\t")
        except ValueError as exc:
            raise CheckpointError(f"bad manifest line: {line!r}") from exc
        shape = tuple(int(d) for d in shape_s.split(",")) if shape_s else ()
        n = int(np.prod(shape, dtype=np.int64)) if shape else 1
        offset = int(offset_s)
        try:
            arr = np.frombuffer(blob, dtype="<f4", count=n, offset=offset).reshape(shape)
        except ValueError as exc:
            raise CheckpointError(f"truncated or corrupt payload for {name!r}: {exc}") from exc
        out[name] = arr.astype(np.float64)
    return out
