"""Seeded random labeled-graph instances."""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .graph import LabeledGraph

FAMILIES = ("uniform-random-edges", "grid", "path", "star")
LABEL_SCHEMES = ("uniform", "clustered")


@dataclass(frozen=True)
class GenSpec:
    family: str = "uniform-random-edges"
    n: int = 100
    m: Optional[int] = None
    rows: Optional[int] = None
    weight_max: int = 100
    labels: int = 4
    label_scheme: str = "uniform"
    seed: int = 0


def parse_kv(text: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def spec_from_config(text: str) -> GenSpec:
    raw = parse_kv(text)
    known = {f.name: f for f in fields(GenSpec)}
    kwargs = {}
    for key, value in raw.items():
        if key not in known:
            raise ValueError(f"unknown generator key {key!r}")
        kwargs[key] = value if key in ("family", "label_scheme") else int(value)
    return GenSpec(**kwargs)


def _edges_for(spec: GenSpec, rng: np.random.Generator) -> list:
    n = spec.n
    if spec.family == "path":
        return [(i, i + 1) for i in range(n - 1)]
    if spec.family == "star":
        return [(0, i) for i in range(1, n)]
    if spec.family == "grid":
        rows = spec.rows or max(1, int(round(n**0.5)))
        if n % rows:
            raise ValueError(f"grid needs n divisible by rows ({n} % {rows} != 0)")
        cols = n // rows
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return edges
    if spec.family == "uniform-random-edges":
        total = n * (n - 1) // 2
        m = spec.m if spec.m is not None else min(total, 3 * n)
        if m < 0 or m > total:
            raise ValueError(f"m={m} outside [0, n(n-1)/2={total}]")
        if total <= 1 << 22:
            iu, iv = np.triu_indices(n, 1)
            idx = np.sort(rng.choice(total, size=m, replace=False))
            return list(zip(iu[idx].tolist(), iv[idx].tolist()))
        seen = set()
        while len(seen) < m:
            u, v = rng.integers(0, n, size=2).tolist()
            if u != v:
                seen.add((min(u, v), max(u, v)))
        return sorted(seen)
    raise ValueError(f"unknown family {spec.family!r}; choose from {FAMILIES}")


def generate(spec: GenSpec) -> LabeledGraph:
    """Build the instance described by ``spec``; identical specs give identical graphs."""
    if spec.n < 1:
        raise ValueError("n must be >= 1")
    if spec.labels < 1:
        raise ValueError("labels must be >= 1")
    if spec.weight_max < 1:
        raise ValueError("weight_max must be >= 1")
    if spec.label_scheme not in LABEL_SCHEMES:
        raise ValueError(f"unknown label scheme {spec.label_scheme!r}")
    rng = np.random.default_rng(spec.seed)
    pairs = _edges_for(spec, rng)
    weights = rng.integers(1, spec.weight_max + 1, size=len(pairs)).tolist()
    if spec.label_scheme == "uniform":
        order = rng.permutation(spec.n)
        label_of = [0] * spec.n
        for i, v in enumerate(order.tolist()):
            label_of[v] = i % spec.labels
    else:
        label_of = [v * spec.labels // spec.n for v in range(spec.n)]
    return LabeledGraph.from_edges(
        spec.n, [(u, v, w) for (u, v), w in zip(pairs, weights)], label_of, spec.labels
    )
