"""On-disk formats: snapshot edge lists, dense CSV snapshots, dataset
manifests, dendrogram JSON, and matrix CSV writers.

All numeric CSV output uses 17 significant digits so doubles round-trip
exactly; JSON floats round-trip via Python's shortest repr.
"""
from __future__ import annotations

import csv
import json
import os
import shutil
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .cluster import Dendrogram, Merge
from .errors import IngestionError
from .netmodel import AdjacencySnapshot

FLOAT_FMT = "%.17g"


def format_float(x: float) -> str:
    return FLOAT_FMT % x


# -- snapshot files ---------------------------------------------------------


def write_edge_list(path: Path, snap: AdjacencySnapshot) -> None:
    """Undirected edge list: mandatory "# n=<n>" first line, then one
    "u v" pair per line with u < v, 0-based ids."""
    rows, cols = np.nonzero(np.triu(snap.matrix, k=1))
    with open(path, "w") as fh:
        fh.write(f"# n={snap.n}\n")
        for u, v in zip(rows.tolist(), cols.tolist()):
            fh.write(f"{u} {v}\n")


def read_edge_list(path: Path) -> AdjacencySnapshot:
    """Parse an edge-list snapshot, rejecting self-loops and duplicates."""

    def fail(lineno: int, msg: str):
        raise IngestionError(f"{path}:{lineno}: {msg}")

    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise IngestionError(f"{path}: cannot read file: {exc}") from exc
    if not lines or not lines[0].startswith("# n="):
        fail(1, 'first line must declare the vertex count as "# n=<n>"')
    try:
        n = int(lines[0][4:].strip())
    except ValueError:
        fail(1, f"invalid vertex count in {lines[0]!r}")
    if n < 0:
        fail(1, f"vertex count must be nonnegative, got {n}")
    A = np.zeros((n, n), dtype=np.uint8)
    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            fail(lineno, f"expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            fail(lineno, f"vertex ids must be integers, got {line!r}")
        if not (0 <= u < n and 0 <= v < n):
            fail(lineno, f"vertex id out of range [0, {n}) in {line!r}")
        if u == v:
            fail(lineno, f"self-loop on vertex {u} not allowed")
        if A[u, v]:
            fail(lineno, f"duplicate edge ({u}, {v})")
        A[u, v] = A[v, u] = 1
    return AdjacencySnapshot(matrix=A)


def write_dense_snapshot(path: Path, snap: AdjacencySnapshot) -> None:
    np.savetxt(path, snap.matrix, fmt="%d", delimiter=",")


def read_dense_snapshot(path: Path) -> AdjacencySnapshot:
    try:
        A = np.loadtxt(path, delimiter=",", dtype=np.int64, ndmin=2)
    except OSError as exc:
        raise IngestionError(f"{path}: cannot read file: {exc}") from exc
    except ValueError as exc:
        raise IngestionError(f"{path}: not a dense 0/1 CSV matrix: {exc}") from exc
    try:
        return AdjacencySnapshot(matrix=A)
    except Exception as exc:
        raise IngestionError(f"{path}: {exc}") from exc


# -- manifest ---------------------------------------------------------------


def write_manifest(path: Path, m: int, T: int, n: int, networks: list[dict]) -> None:
    payload = {"m": m, "T": T, "n": n, "networks": networks}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path: Path) -> dict:
    path = Path(path)
    try:
        with open(path) as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise IngestionError(f"{path}: cannot read manifest: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IngestionError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    for key in ("m", "T", "n", "networks"):
        if key not in manifest:
            raise IngestionError(f"{path}: manifest is missing key {key!r}")
    if len(manifest["networks"]) != manifest["m"]:
        raise IngestionError(
            f"{path}: manifest lists {len(manifest['networks'])} networks, m={manifest['m']}"
        )
    for net in manifest["networks"]:
        if "id" not in net or "snapshots" not in net:
            raise IngestionError(f"{path}: each network needs 'id' and 'snapshots'")
        if len(net["snapshots"]) != manifest["T"]:
            raise IngestionError(
                f"{path}: network {net['id']!r} has {len(net['snapshots'])} snapshots, T={manifest['T']}"
            )
    return manifest


# -- matrices, labels, dendrograms -----------------------------------------


def write_matrix_csv(path: Path, M: np.ndarray, header: Sequence[str]) -> None:
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    if len(header) != M.shape[1]:
        raise ValueError(f"{len(header)} header fields for {M.shape[1]} columns")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in M:
            writer.writerow([format_float(x) for x in row])


def write_labeled_matrix_csv(
    path: Path, M: np.ndarray, row_names: Sequence[str], col_names: Sequence[str], corner: str
) -> None:
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([corner, *col_names])
        for name, row in zip(row_names, M):
            writer.writerow([name, *(format_float(x) for x in row)])


def write_labels_csv(path: Path, ids: Sequence[str], labels: Sequence[int]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label"])
        for name, lab in zip(ids, labels):
            writer.writerow([name, int(lab)])


def read_labels_csv(path: Path) -> tuple[list[str], list[str]]:
    """Returns (ids, raw label strings) in file order."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IngestionError(f"{path}: cannot read file: {exc}") from exc
    if not rows or [c.strip() for c in rows[0][:2]] != ["id", "label"]:
        raise IngestionError(f"{path}:1: expected header 'id,label'")
    ids, labels = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) < 2:
            raise IngestionError(f"{path}:{lineno}: expected 'id,label', got {row!r}")
        ids.append(row[0])
        labels.append(row[1])
    return ids, labels


def write_dendrogram_json(path: Path, dendro: Dendrogram) -> None:
    payload = {
        "leaves": dendro.leaves,
        "merges": [
            {"a": mg.a, "b": mg.b, "height": mg.height, "new_id": mg.new_id}
            for mg in dendro.merges
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_dendrogram_json(path: Path) -> Dendrogram:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise IngestionError(f"{path}: cannot read file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IngestionError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    try:
        merges = tuple(
            Merge(a=int(mg["a"]), b=int(mg["b"]), height=float(mg["height"]),
                  new_id=int(mg["new_id"]))
            for mg in payload["merges"]
        )
        return Dendrogram(leaves=int(payload["leaves"]), merges=merges)
    except (KeyError, TypeError, ValueError) as exc:
        raise IngestionError(f"{path}: invalid dendrogram JSON: {exc}") from exc


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- atomic output directories ----------------------------------------------


@contextmanager
def atomic_output_dir(out: Path) -> Iterator[Path]:
    """Stage outputs in a sibling temp directory, renamed into place on
    success, so interrupted runs never leave a valid-looking directory."""
    out = Path(out)
    if out.exists():
        raise IngestionError(f"output directory {out} already exists")
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.parent / f".{out.name}.tmp-{os.getpid()}"
    if tmp.exists():
        shutil.rmtree(tmp)
    tmp.mkdir()
    try:
        yield tmp
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    os.rename(tmp, out)
