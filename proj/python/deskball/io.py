"""Dataset CSV and weights JSON, as a trainer reads and writes them."""

import csv
import json

import numpy as np

SCHEMA_LINE = "#schema_version="


def read_dataset(path):
    """Returns (features float64 [n, 92], labels int64 [n]) from a train/test CSV."""
    with open(path, newline="") as f:
        first = f.readline().strip()
        if not first.startswith(SCHEMA_LINE):
            raise ValueError(f"{path}: missing {SCHEMA_LINE} line")
        version = int(first[len(SCHEMA_LINE):])
        if version != 1:
            raise ValueError(f"{path}: schema version {version}, expected 1")
        reader = csv.reader(f)
        header = next(reader)
        if header[-1] != "label" or len(header) != 93:
            raise ValueError(f"{path}: unexpected header")
        rows = [r for r in reader if r]
    if not rows:
        return np.zeros((0, 92)), np.zeros(0, dtype=np.int64)
    data = np.array(rows, dtype=np.float64)
    return data[:, :-1], data[:, -1].astype(np.int64)


def write_weights(path, layers, schema_version=1):
    """`layers` is a list of (W [out, in], b [out], "relu" | "softmax")."""
    dims = [int(np.asarray(layers[0][0]).shape[1])]
    out = []
    for w, b, act in layers:
        w = np.asarray(w, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if w.shape[0] != b.shape[0] or w.shape[1] != dims[-1]:
            raise ValueError("layer shapes do not chain")
        dims.append(int(w.shape[0]))
        out.append({"w": w.tolist(), "b": b.tolist(), "act": act})
    with open(path, "w") as f:
        json.dump({"schema_version": schema_version, "dims": dims, "layers": out}, f)


def read_weights(path):
    with open(path) as f:
        doc = json.load(f)
    return [(np.array(l["w"], dtype=np.float64), np.array(l["b"], dtype=np.float64), l["act"]) for l in doc["layers"]]


def forward(layers, x):
    """Reference forward pass; rows of `x` are samples."""
    h = np.atleast_2d(np.asarray(x, dtype=np.float64))
    for w, b, act in layers:
        h = h @ w.T + b
        if act == "relu":
            h = np.maximum(h, 0.0)
        else:
            h = np.exp(h - h.max(axis=1, keepdims=True))
            h /= h.sum(axis=1, keepdims=True)
    return h
