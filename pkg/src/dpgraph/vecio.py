"""Binary file formats: fvecs/ivecs vectors, index files, ground truth.

fvecs and ivecs store one record per vector: a little-endian int32 element
count d followed by d little-endian float32 or int32 values.  Every record
in a file must declare the same d.

Index files are a flat little-endian layout: magic "DPGI", format version
(u32), graph kind (u32: 0 = knn, 1 = dpg), node count n (u32), the graph
parameter (u32: K for knn, kappa for dpg), then for each node a degree
(u32) followed by degree (id u32, dist f32) pairs.

Ground truth is persisted as three files sharing a prefix: ids in
<prefix>.ivecs, distances in <prefix>.fvecs, and a small JSON sidecar
<prefix>.json holding k and the measured brute-force baseline time.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .data import DenseDataset, QuerySet
from .errors import FormatError
from .exact import GroundTruth
from .graph import DPG, KNN, NeighborGraph

_MAGIC = b"DPGI"
_VERSION = 1
_KIND_CODES = {KNN: 0, DPG: 1}
_KIND_NAMES = {code: kind for kind, code in _KIND_CODES.items()}


def _read_vecs(path, what: str) -> np.ndarray:
    """Shared fvecs/ivecs reader; returns the raw (n, d) little-endian i4 table."""
    raw = np.fromfile(path, dtype=np.uint8)
    if raw.size == 0:
        raise FormatError(f"{path}: empty {what} file")
    if raw.size < 4:
        raise FormatError(f"{path}: truncated {what} header")
    d = int(raw[:4].view("<i4")[0])
    if d < 1:
        raise FormatError(f"{path}: invalid vector length {d}")
    record = 4 * (d + 1)
    if raw.size % record != 0:
        offset = (raw.size // record) * record
        raise FormatError(
            f"{path}: truncated {what} record at byte offset {offset} "
            f"(file size {raw.size}, record size {record})"
        )
    count = raw.size // record
    table = raw.view("<i4").reshape(count, d + 1)
    lengths = table[:, 0]
    if not np.all(lengths == d):
        first = int(np.argmax(lengths != d))
        raise FormatError(
            f"{path}: inconsistent vector length at byte offset {first * record} "
            f"(expected {d}, found {int(lengths[first])})"
        )
    return np.ascontiguousarray(table[:, 1:])


def read_fvecs(path) -> np.ndarray:
    """Read an fvecs file into an (n, d) float32 array."""
    return _read_vecs(path, "fvecs").view("<f4").astype(np.float32)


def read_ivecs(path) -> np.ndarray:
    """Read an ivecs file into an (n, d) int32 array."""
    return _read_vecs(path, "ivecs").astype(np.int32)


def _write_vecs(path, words: np.ndarray) -> None:
    """Write an (n, d) little-endian i4 word table with length prefixes."""
    n, d = words.shape
    table = np.empty((n, d + 1), dtype="<i4")
    table[:, 0] = d
    table[:, 1:] = words
    table.tofile(path)


def write_fvecs(path, arr) -> None:
    """Write an (n, d) array as fvecs (values cast to float32)."""
    out = np.ascontiguousarray(arr, dtype="<f4")
    if out.ndim != 2:
        raise ValueError("fvecs input must be 2-d")
    _write_vecs(path, out.view("<i4"))


def write_ivecs(path, arr) -> None:
    """Write an (n, d) array as ivecs (values cast to int32)."""
    out = np.ascontiguousarray(arr, dtype="<i4")
    if out.ndim != 2:
        raise ValueError("ivecs input must be 2-d")
    _write_vecs(path, out)


def load_dataset(path) -> DenseDataset:
    return DenseDataset(read_fvecs(path))


def load_queries(path) -> QuerySet:
    return QuerySet(read_fvecs(path))


def save_index(path, graph: NeighborGraph) -> None:
    """Serialize a NeighborGraph to the flat index layout described above."""
    header = struct.pack("<4sIIII", _MAGIC, _VERSION, _KIND_CODES[graph.kind], graph.n, graph.param)
    degrees = np.diff(graph.indptr)
    # Interleave degree and adjacency blocks without a Python loop over
    # edges; ids stay u32 words and dists become their f32 bit patterns.
    body = np.empty(graph.num_edges * 2, dtype="<u4")
    body[0::2] = graph.neighbor_ids.astype("<u4")
    body[1::2] = graph.neighbor_dists.astype("<f4").view("<u4")
    out = np.empty(graph.n + 2 * graph.num_edges, dtype="<u4")
    starts = np.zeros(graph.n, dtype=np.int64)
    np.cumsum(degrees[:-1] * 2 + 1, out=starts[1:])
    out[starts] = degrees.astype("<u4")
    mask = np.ones(out.shape[0], dtype=bool)
    mask[starts] = False
    out[mask] = body
    with open(path, "wb") as fh:
        fh.write(header)
        out.tofile(fh)


def load_index(path) -> NeighborGraph:
    """Read an index file back into a validated NeighborGraph.

    Raises FormatError for layout problems and GraphStructureError when the
    stored adjacency violates the declared kind's invariants, for example a
    dpg graph whose lists are not symmetric.
    """
    raw = np.fromfile(path, dtype=np.uint8)
    if raw.size < 20:
        raise FormatError(f"{path}: truncated index header")
    magic, version, kind_code, n, param = struct.unpack("<4sIIII", raw[:20].tobytes())
    if magic != _MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise FormatError(f"{path}: unsupported index version {version}")
    if kind_code not in _KIND_NAMES:
        raise FormatError(f"{path}: unknown graph kind code {kind_code}")
    if n < 1 or param < 1:
        raise FormatError(f"{path}: invalid header values n={n}, param={param}")
    body = raw[20:]
    if body.size % 4 != 0:
        raise FormatError(f"{path}: body is not word-aligned")
    words = body.view("<u4")
    # Walk the degree headers to locate each adjacency block.
    degrees = np.empty(n, dtype=np.int64)
    pos = 0
    for u in range(n):
        if pos >= words.size:
            raise FormatError(f"{path}: truncated at node {u}")
        deg = int(words[pos])
        degrees[u] = deg
        pos += 1 + 2 * deg
    if pos > words.size:
        raise FormatError(
            f"{path}: truncated adjacency data (needs {pos} words, file has {words.size})"
        )
    if pos < words.size:
        raise FormatError(f"{path}: {words.size - pos} trailing words")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=indptr[1:])
    total = int(indptr[-1])
    # Word position of global edge e under node u is 2 * e + u + 1.
    slots = np.arange(total, dtype=np.int64) * 2 + np.repeat(
        np.arange(1, n + 1, dtype=np.int64), degrees
    )
    ids = words[slots].astype(np.int32)
    dists = np.ascontiguousarray(words[slots + 1]).view("<f4").astype(np.float32)
    graph = NeighborGraph(_KIND_NAMES[kind_code], int(param), indptr, ids, dists)
    try:
        graph.validate()
    except ValueError as exc:
        raise type(exc)(f"{path}: {exc}") from exc
    return graph


def _gt_paths(prefix) -> tuple[Path, Path, Path]:
    base = str(prefix)
    return Path(base + ".ivecs"), Path(base + ".fvecs"), Path(base + ".json")


def save_ground_truth(prefix, gt: GroundTruth) -> None:
    """Write ground truth as <prefix>.ivecs / .fvecs / .json."""
    ids_path, dists_path, meta_path = _gt_paths(prefix)
    write_ivecs(ids_path, gt.ids)
    write_fvecs(dists_path, gt.dists)
    meta = {"k": gt.k, "baseline_time": gt.baseline_time, "num_queries": gt.m}
    meta_path.write_text(json.dumps(meta, indent=2) + "\n")


def load_ground_truth(prefix) -> GroundTruth:
    """Read ground truth written by save_ground_truth."""
    ids_path, dists_path, meta_path = _gt_paths(prefix)
    ids = read_ivecs(ids_path)
    dists = read_fvecs(dists_path)
    try:
        meta = json.loads(meta_path.read_text())
        k = int(meta["k"])
        baseline = float(meta["baseline_time"])
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{meta_path}: bad ground truth sidecar ({exc})") from exc
    if ids.shape != dists.shape or ids.shape[1] != k:
        raise FormatError(f"{prefix}: ids/dists shapes disagree with k={k}")
    return GroundTruth(k=k, ids=ids, dists=dists, baseline_time=baseline)
