"""Writes the weight/subspace pairs used by the CLI determinism check."""

import json
import pathlib
import sys

import numpy as np


def matrix(m):
    m = np.atleast_2d(np.asarray(m, dtype=float))
    return {"rows": m.shape[0], "cols": m.shape[1], "data": [float(v) for v in m.ravel()]}


def psd(rng, n, r):
    g = rng.standard_normal((n, r))
    a = g @ g.T
    return (a + a.T) / 2


def pairs(rng):
    yield np.eye(2), np.array([[1.0], [0.0]])
    yield np.array([[1.0, 1.0], [1.0, 1.0]]), np.array([[1.0], [0.0]])
    yield np.diag([0.0, 1.0]), np.array([[1.0], [0.0]])
    yield np.zeros((3, 3)), rng.standard_normal((3, 2))
    yield psd(rng, 4, 2), rng.standard_normal((4, 2))
    a = psd(rng, 5, 3)
    w, v = np.linalg.eigh(a)
    yield a, np.column_stack([v[:, 0], rng.standard_normal(5)])
    yield psd(rng, 3, 3), rng.standard_normal((3, 1))
    yield psd(rng, 6, 3), rng.standard_normal((6, 4))
    yield psd(rng, 8, 5), rng.standard_normal((8, 3))
    yield psd(rng, 7, 4), np.eye(7)


def main(out):
    out = pathlib.Path(out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240917)
    for i, (a, span) in enumerate(pairs(rng), start=1):
        n = a.shape[0]
        (out / f"pair{i:02d}_a.json").write_text(json.dumps(matrix(a)) + "\n")
        (out / f"pair{i:02d}_s.json").write_text(
            json.dumps({"ambient": n, "span": matrix(span)}) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures")
