"""Reading and writing of matrices, datasets, tables, and traces.

Matrices travel as dense comma-separated text grids, one row per line, with
optional '#' comment lines.  Posterior tables and chain traces are CSV with
'#'-prefixed metadata headers.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .decomp import BlockDecomposition
from .select import ChainTrace, PosteriorTable
from .wishart import DataSet


def write_matrix(path, m: np.ndarray, comment: str | None = None):
    m = np.atleast_2d(np.asarray(m, dtype=float))
    header = comment if comment is not None else ""
    np.savetxt(path, m, delimiter=",", fmt="%.17g", header=header)


def read_matrix(path) -> np.ndarray:
    m = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    return m


def read_square_matrix(path) -> np.ndarray:
    m = read_matrix(path)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{path}: expected a square matrix, got {m.shape}")
    return m


def write_dataset(directory, data: DataSet, stem: str = "data"):
    """Write scatter (and samples when present) under the directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_matrix(directory / f"{stem}_scatter.csv", data.scatter, comment=f"n={data.n}")
    if data.samples is not None:
        np.savetxt(directory / f"{stem}_samples.csv", data.samples,
                   delimiter=",", fmt="%.17g")


def read_dataset(samples_path=None, scatter_path=None, n: int | None = None) -> DataSet:
    """Dataset from a samples file (rows are observations) or a scatter
    matrix file with an explicit observation count."""
    if samples_path is not None:
        z = read_matrix(samples_path)
        return DataSet.from_samples(z)
    if scatter_path is None:
        raise ValueError("either a samples file or a scatter file is required")
    u = read_square_matrix(scatter_path)
    if n is None:
        raise ValueError("n is required when reading a scatter matrix")
    return DataSet(scatter=u, n=n)


def _write_metadata(fh, metadata: dict):
    for k in sorted(metadata):
        fh.write(f"# {k}={metadata[k]}\n")


def write_posterior(path, table: PosteriorTable):
    with open(path, "w", newline="") as fh:
        _write_metadata(fh, table.metadata)
        w = csv.writer(fh)
        w.writerow(["model", "probability", "log_unnorm_posterior"])
        for label, prob, lg in zip(table.labels, table.probabilities, table.log_unnorm):
            w.writerow([label, f"{prob:.12g}", f"{lg:.12g}"])


def read_posterior(path) -> PosteriorTable:
    metadata = {}
    rows = []
    with open(path, newline="") as fh:
        text_rows = []
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    metadata[k.strip()] = v.strip()
                continue
            text_rows.append(line)
        for row in csv.reader(io.StringIO("".join(text_rows))):
            if row and row[0] != "model":
                rows.append(row)
    return PosteriorTable(
        labels=tuple(r[0] for r in rows),
        probabilities=np.array([float(r[1]) for r in rows]),
        log_unnorm=np.array([float(r[2]) for r in rows]),
        metadata=metadata,
    )


def write_trace(path, trace: ChainTrace):
    """Per-step trace: model generator, accepted flag, log posterior, weight."""
    logpost = trace.logpost_of_step()
    weight = trace.weight_of_step()
    labels = trace.model_labels
    with open(path, "w", newline="") as fh:
        _write_metadata(fh, {
            "algorithm": trace.algorithm,
            "p": trace.p,
            "steps": trace.steps,
            "seed": trace.seed,
            "delta": trace.delta,
            "n": trace.n,
            "start": trace.start_label,
            "acceptance_rate": f"{trace.acceptance_rate:.6g}",
        })
        w = csv.writer(fh)
        w.writerow(["step", "model", "accepted", "log_unnorm_posterior", "weight"])
        for t in range(trace.steps):
            mi = trace.model_of_step[t]
            w.writerow([
                t,
                labels[mi],
                int(trace.accepted[t]),
                f"{logpost[t]:.12g}",
                f"{weight[t]:.12g}",
            ])


def write_decomposition(path, dec: BlockDecomposition, group_label: str):
    """Structured text record of a decomposition: block shapes then the
    orthogonal basis to full precision."""
    with open(path, "w") as fh:
        fh.write(f"# group={group_label}\n")
        fh.write(f"# p={dec.p}\n")
        fh.write(f"# dim={dec.dim}\n")
        for i, b in enumerate(dec.blocks, start=1):
            fh.write(
                f"# block{i}: rank={b.rank} field={b.field} mult={b.mult} "
                f"cols={b.start}..{b.stop - 1}\n"
            )
        for row in dec.basis:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
