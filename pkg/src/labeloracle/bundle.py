"""Versioned binary container for fitted oracles.

Layout: ``b"VLDO"``, ``u16`` version, ``u16`` section count, then per section a
4-byte ASCII tag, ``u32`` payload length, ``u32`` CRC32 and a canonical JSON
payload. Encoding is deterministic, so equal oracles give equal bytes.
"""
from __future__ import annotations

import json
import struct
import zlib

from .hierarchy import (
    BunchSet,
    ClusterForest,
    Hierarchy,
    LabelBunch,
    LastLevelLabelDist,
    PairSet,
    PivotLabelTables,
    PivotTable,
)
from .oracles import PathReportingLabelOracle, TwoSidedLabelOracle
from .pairwise import ExactPairwiseOracle

MAGIC = b"VLDO"
VERSION = 1

_KINDS = {"pr": PathReportingLabelOracle, "2k1": TwoSidedLabelOracle}

# tag -> (attribute, payload class)
_SECTIONS = [
    (b"HIER", "hierarchy_", Hierarchy),
    (b"PIVT", "pivots_", PivotTable),
    (b"BUNC", "bunches_", BunchSet),
    (b"LBUN", "label_bunches_", LabelBunch),
    (b"CLUS", "clusters_", ClusterForest),
    (b"PTAB", "pivot_tables_", PivotLabelTables),
    (b"LAST", "last_level_", LastLevelLabelDist),
    (b"PAIR", "pair_set_", PairSet),
    (b"PWOR", "pairwise_", ExactPairwiseOracle),
]


class BundleError(ValueError):
    pass


def _encode(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def oracle_kind(oracle) -> str:
    for kind, cls in _KINDS.items():
        if type(oracle) is cls:
            return kind
    raise TypeError(f"cannot serialize {type(oracle).__name__}")


def dumps(oracle) -> bytes:
    kind = oracle_kind(oracle)
    params = oracle.get_params()
    params["random_state"] = oracle.hierarchy_.seed
    meta = {
        "kind": kind,
        "params": params,
        "graph_hash": oracle.graph_hash_,
        "n": oracle.n_vertices_,
        "n_labels": oracle.n_labels_,
        "label_of": list(oracle.label_of_),
    }
    sections = [(b"META", _encode(meta))]
    for tag, attr, _ in _SECTIONS:
        value = getattr(oracle, attr, None)
        if value is not None:
            sections.append((tag, _encode(value.to_payload())))
    out = [MAGIC, struct.pack("<HH", VERSION, len(sections))]
    for tag, payload in sections:
        out.append(tag + struct.pack("<II", len(payload), zlib.crc32(payload)) + payload)
    return b"".join(out)


def loads(data: bytes):
    if data[:4] != MAGIC:
        raise BundleError("not an oracle bundle (bad magic)")
    version, count = struct.unpack_from("<HH", data, 4)
    if version != VERSION:
        raise BundleError(f"unsupported bundle version {version}")
    pos = 8
    sections = {}
    for _ in range(count):
        if pos + 12 > len(data):
            raise BundleError("truncated bundle")
        tag = data[pos : pos + 4]
        length, crc = struct.unpack_from("<II", data, pos + 4)
        payload = data[pos + 12 : pos + 12 + length]
        if len(payload) != length or zlib.crc32(payload) != crc:
            raise BundleError(f"corrupt section {tag!r}")
        sections[tag] = json.loads(payload)
        pos += 12 + length
    if b"META" not in sections:
        raise BundleError("bundle has no META section")
    meta = sections[b"META"]
    oracle = _KINDS[meta["kind"]](**meta["params"])
    oracle.n_vertices_ = meta["n"]
    oracle.n_labels_ = meta["n_labels"]
    oracle.label_of_ = tuple(meta["label_of"])
    sizes = [0] * meta["n_labels"]
    for lam in oracle.label_of_:
        sizes[lam] += 1
    oracle.label_sizes_ = tuple(sizes)
    oracle.graph_hash_ = meta["graph_hash"]
    for tag, attr, cls in _SECTIONS:
        setattr(oracle, attr, cls.from_payload(sections[tag]) if tag in sections else None)
    return oracle


def save(oracle, path) -> None:
    with open(path, "wb") as f:
        f.write(dumps(oracle))


def load(path):
    with open(path, "rb") as f:
        return loads(f.read())
