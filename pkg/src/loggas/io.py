"""CSV and JSON interchange formats.

Floats are written with repr (shortest round-trip form) and files end
with a newline, so identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .model import DiscreteMeasure


def _fmt(v: float) -> str:
    return repr(float(v))


def write_measure_csv(path, mu: DiscreteMeasure) -> None:
    """Sphere measures as x1,x2,x3,weight; plane measures as re,im,weight
    (collapsed to x,weight when every atom is real)."""
    lines = []
    if mu.side == "sphere":
        lines.append("x1,x2,x3,weight")
        for p, w in zip(mu.positions, mu.weights):
            lines.append(f"{_fmt(p[0])},{_fmt(p[1])},{_fmt(p[2])},{_fmt(w)}")
    elif np.all(mu.positions.imag == 0.0):
        lines.append("x,weight")
        for p, w in zip(mu.positions, mu.weights):
            lines.append(f"{_fmt(p.real)},{_fmt(w)}")
    else:
        lines.append("re,im,weight")
        for p, w in zip(mu.positions, mu.weights):
            lines.append(f"{_fmt(p.real)},{_fmt(p.imag)},{_fmt(w)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_measure_csv(path) -> DiscreteMeasure:
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",")
    rows = np.array([[float(c) for c in line.split(",")] for line in text[1:]])
    if header == ["x1", "x2", "x3", "weight"]:
        return DiscreteMeasure(rows[:, :3], rows[:, 3], side="sphere")
    if header == ["x", "weight"]:
        return DiscreteMeasure(rows[:, 0].astype(complex), rows[:, 1], side="plane")
    if header == ["re", "im", "weight"]:
        return DiscreteMeasure(rows[:, 0] + 1j * rows[:, 1], rows[:, 2], side="plane")
    raise ValueError(f"unrecognized measure CSV header: {header}")


def write_samples_csv(path, records) -> None:
    """Samples as chain,sweep,particle,re,im rows.

    ``records`` yields (chain_index, sweep_index, points) triples.
    """
    lines = ["chain,sweep,particle,re,im"]
    for chain, sweep, points in records:
        for k, p in enumerate(np.asarray(points, dtype=complex)):
            lines.append(f"{chain},{sweep},{k},{_fmt(p.real)},{_fmt(p.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_samples_csv(path) -> dict:
    """Returns arrays: chain, sweep, particle (ints) and values (complex)."""
    text = Path(path).read_text().strip().splitlines()
    if text[0] != "chain,sweep,particle,re,im":
        raise ValueError(f"unrecognized samples CSV header: {text[0]}")
    chains, sweeps, particles, values = [], [], [], []
    for line in text[1:]:
        c, s, k, re, im = line.split(",")
        chains.append(int(c))
        sweeps.append(int(s))
        particles.append(int(k))
        values.append(complex(float(re), float(im)))
    return {
        "chain": np.array(chains),
        "sweep": np.array(sweeps),
        "particle": np.array(particles),
        "values": np.array(values),
    }


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())
