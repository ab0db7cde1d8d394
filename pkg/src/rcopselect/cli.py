"""Command line interface.

Subcommands
    decompose     block structure of one symmetry model
    select-exact  exact posterior over a model catalog
    mh            Monte Carlo search over cyclic symmetry models
    gen-data      sample Gaussian data with a chosen covariance

Every report writes delimited text files plus rendered figures into the
output directory.  Exit codes: 0 success, 2 configuration error, 3 numeric
or domain error, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dataio, figures
from . import rng as _rng
from .colored import coloring, project
from .datasets import frets_dataset
from .decomp import decompose
from .errors import CapExceededError, DecompositionError, DomainError
from .perm import CyclicGroup, PermutationGroup, parse_cycles
from .select import (
    catalog_cyclic,
    catalog_p4,
    estimate_posterior,
    exhaustive_posterior,
    mh_cyclic,
    mh_sym,
)
from .wishart import DataSet, circulant_sigma, gaussian_dataset


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated arguments shared by the data-consuming subcommands."""

    p: int
    delta: float
    scale: np.ndarray
    data: DataSet
    out: Path
    seed: int


def _parse_generators(text: str, p: int):
    """Split a generator list on commas outside parentheses and parse each."""
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ConfigError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ConfigError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    try:
        return [parse_cycles(part, p) for part in parts if part.strip()]
    except ValueError as err:
        raise ConfigError(str(err)) from err


def _group_from_args(args):
    gens = _parse_generators(args.group or "", args.p)
    if len(gens) <= 1:
        g = gens[0] if gens else parse_cycles("", args.p)
        return CyclicGroup(g)
    return PermutationGroup(gens, p=args.p)


def _parse_scale(spec: str, p: int) -> np.ndarray:
    if spec.startswith("identity:"):
        try:
            factor = float(spec.split(":", 1)[1])
        except ValueError as err:
            raise ConfigError(f"bad scale factor in {spec!r}") from err
        if factor <= 0:
            raise ConfigError("identity scale factor must be positive")
        return factor * np.eye(p)
    if spec.startswith("file:"):
        path = spec.split(":", 1)[1]
        try:
            m = dataio.read_square_matrix(path)
        except OSError as err:
            raise ConfigError(f"cannot read scale matrix: {err}") from err
        if m.shape[0] != p:
            raise ConfigError(f"scale matrix is {m.shape[0]}x{m.shape[0]}, expected p={p}")
        return m
    raise ConfigError(f"scale spec must be identity:<factor> or file:<path>, got {spec!r}")


def _load_data(args) -> DataSet:
    sources = sum(bool(x) for x in (args.frets, args.data, args.scatter))
    if sources != 1:
        raise ConfigError("exactly one of --frets, --data, --scatter is required")
    if args.frets:
        return frets_dataset()
    try:
        if args.data:
            return dataio.read_dataset(samples_path=args.data)
        if args.n is None:
            raise ConfigError("--n is required with --scatter")
        return dataio.read_dataset(scatter_path=args.scatter, n=args.n)
    except (OSError, ValueError) as err:
        if isinstance(err, DomainError):
            raise
        raise ConfigError(str(err)) from err


def _run_config(args) -> RunConfig:
    data = _load_data(args)
    p = data.p
    if args.p is not None and args.p != p:
        raise ConfigError(f"--p {args.p} does not match data dimension {p}")
    scale = _parse_scale(args.D, p)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return RunConfig(p=p, delta=args.delta, scale=scale, data=data,
                     out=out, seed=args.seed)


def _add_data_args(sp):
    sp.add_argument("--data", help="samples file, one observation per line")
    sp.add_argument("--scatter", help="scatter matrix file (requires --n)")
    sp.add_argument("--n", type=int, help="observation count for --scatter")
    sp.add_argument("--frets", action="store_true", help="use the built-in heads data")
    sp.add_argument("--delta", type=float, default=3.0, help="prior shape (default 3)")
    sp.add_argument("--D", default="identity:1",
                    help="prior scale: identity:<factor> or file:<path>")
    sp.add_argument("--p", type=int, help="dimension check against the data")
    sp.add_argument("--out", default="out", help="output directory")
    sp.add_argument("--seed", type=int, default=0)


def cmd_decompose(args) -> int:
    group = _group_from_args(args)
    dec = decompose(group)
    col = coloring(group)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    label = args.group or "id"

    print(f"group {label}  p={args.p}")
    print(f"colored space dimension {col.dim} "
          f"({col.n_vertex_classes} vertex + {col.n_edge_classes} edge classes)")
    for i, b in enumerate(dec.blocks, start=1):
        print(f"block {i}: rank={b.rank} field={b.field} mult={b.mult}")

    dataio.write_decomposition(out / "decomposition.txt", dec, label)
    np.savetxt(out / "coloring.csv", col.grid, delimiter=",", fmt="%d")
    figures.coloring_map(col.grid, out / "coloring.png", title=f"coloring of {label}")
    rng = _rng.stream(args.seed, "decompose-demo")
    g = rng.standard_normal((args.p, args.p))
    x = project(col, g + g.T)
    compressed = dec.compress(x)
    dataio.write_matrix(out / "compressed_example.csv", compressed,
                        comment="adapted-basis form of a random invariant matrix")
    figures.heatmap(np.abs(compressed), out / "compressed_example.png",
                    title="block pattern (absolute values)")
    print(f"wrote {out}/decomposition.txt, coloring.csv/png, compressed_example.csv/png")
    return 0


def cmd_select_exact(args) -> int:
    cfg = _run_config(args)
    if args.catalog == "p4-all22":
        if cfg.p != 4:
            raise ConfigError("catalog p4-all22 requires 4-dimensional data")
        catalog = catalog_p4()
    else:
        catalog = catalog_cyclic(cfg.p, cap=args.enumeration_cap)
    table = exhaustive_posterior(catalog, cfg.data, cfg.delta, cfg.scale,
                                 metadata={"seed": cfg.seed, "D": args.D})
    dataio.write_posterior(cfg.out / "posterior.csv", table)
    figures.posterior_bars(table.labels, table.probabilities,
                           cfg.out / "posterior.png",
                           title=f"exact posterior ({catalog.name})")
    print(f"exact posterior over {len(catalog)} models (delta={cfg.delta}, D={args.D})")
    for label, prob in table.top(5):
        print(f"  {label:24s} {100 * prob:6.2f}%")
    print(f"wrote {cfg.out}/posterior.csv, posterior.png")
    return 0


def _chain_job(payload):
    (algorithm, data, delta, scale, steps, seed, start_text, p) = payload
    start = None
    if start_text:
        perm = parse_cycles(start_text, p)
        start = CyclicGroup(perm) if algorithm == "cyclic" else perm
    runner = mh_cyclic if algorithm == "cyclic" else mh_sym
    return runner(data, delta, scale, steps, seed=seed, start=start)


def cmd_mh(args) -> int:
    cfg = _run_config(args)
    payloads = [
        (args.algorithm, cfg.data, cfg.delta, cfg.scale, args.T,
         cfg.seed + i, args.start, cfg.p)
        for i in range(args.chains)
    ]
    if args.chains > 1:
        with ProcessPoolExecutor(max_workers=args.chains) as pool:
            traces = list(pool.map(_chain_job, payloads))
    else:
        traces = [_chain_job(payloads[0])]

    for i, trace in enumerate(traces):
        suffix = f"_{i}" if args.chains > 1 else ""
        dataio.write_trace(cfg.out / f"trace{suffix}.csv", trace)
        table = estimate_posterior(trace, discard=args.discard)
        dataio.write_posterior(cfg.out / f"estimate{suffix}.csv", table)
        figures.chain_curves(trace, cfg.out / f"chain{suffix}.png",
                             title=f"{args.algorithm} chain, seed {trace.seed}")
        figures.posterior_bars(table.labels, table.probabilities,
                               cfg.out / f"estimate{suffix}.png",
                               title=f"estimated posterior (seed {trace.seed})")
        best = table.labels[0]
        print(f"chain {i}: seed={trace.seed} acceptance={trace.acceptance_rate:.4f} "
              f"models={len(trace.model_labels)} top={best} "
              f"({100 * table.probabilities[0]:.1f}%)")
        best_group = CyclicGroup(parse_cycles(best, cfg.p))
        sigma_hat = project(best_group, cfg.data.scatter) / max(cfg.data.n, 1)
        dataio.write_matrix(cfg.out / f"sigma_top{suffix}.csv", sigma_hat,
                            comment=f"projected covariance for {best}")
        figures.heatmap(sigma_hat, cfg.out / f"sigma_top{suffix}.png",
                        title=f"projected covariance, {best}")
    print(f"wrote traces, estimates and figures to {cfg.out}")
    return 0


def cmd_gen_data(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.frets:
        data = frets_dataset()
        sigma = None
        print(f"built-in heads data: n={data.n}, p={data.p}")
    else:
        if args.p is None or args.n is None:
            raise ConfigError("--p and --n are required unless --frets is given")
        if args.sigma == "circulant":
            sigma = circulant_sigma(args.p)
        elif args.sigma == "identity":
            sigma = np.eye(args.p)
        elif args.sigma.startswith("file:"):
            sigma = dataio.read_square_matrix(args.sigma.split(":", 1)[1])
            if sigma.shape[0] != args.p:
                raise ConfigError("covariance file does not match --p")
        else:
            raise ConfigError(f"unknown covariance spec {args.sigma!r}")
        data = gaussian_dataset(sigma, args.n, _rng.stream(args.seed, "gen-data"))
        print(f"sampled n={args.n} observations in dimension p={args.p} "
              f"(sigma={args.sigma}, seed={args.seed})")
    dataio.write_dataset(out, data)
    if sigma is not None:
        dataio.write_matrix(out / "sigma.csv", sigma, comment="sampling covariance")
        figures.heatmap(sigma, out / "sigma.png", title="covariance")
    figures.heatmap(data.scatter / max(data.n, 1), out / "scatter_mean.png",
                    title="scatter / n")
    print(f"wrote {out}/data_scatter.csv" +
          (", data_samples.csv" if data.samples is not None else "") +
          " and figures")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rcopselect",
        description="Model selection among permutation-symmetric Gaussian models",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("decompose", help="block structure of one model")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--group", default="",
                    help='generators, e.g. "(1,2,3)(4,5)" or "(1,2),(3,4)"')
    sp.add_argument("--out", default="out")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("select-exact", help="exact posterior over a catalog")
    sp.add_argument("--catalog", choices=["p4-all22", "cyclic"], default="cyclic")
    sp.add_argument("--enumeration-cap", type=int, default=8,
                    help="largest p for cyclic catalog enumeration")
    _add_data_args(sp)
    sp.set_defaults(func=cmd_select_exact)

    sp = sub.add_parser("mh", help="Monte Carlo over cyclic models")
    sp.add_argument("--algorithm", choices=["cyclic", "sym"], default="cyclic")
    sp.add_argument("--T", type=int, default=100_000, help="steps per chain")
    sp.add_argument("--chains", type=int, default=1,
                    help="independent chains, seeded seed, seed+1, ...")
    sp.add_argument("--start", default="", help="starting generator")
    sp.add_argument("--discard", type=int, default=0,
                    help="steps discarded before estimation")
    _add_data_args(sp)
    sp.set_defaults(func=cmd_mh)

    sp = sub.add_parser("gen-data", help="sample Gaussian data")
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--sigma", default="circulant",
                    help="circulant, identity, or file:<path>")
    sp.add_argument("--frets", action="store_true",
                    help="emit the built-in heads data instead of sampling")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="out")
    sp.set_defaults(func=cmd_gen_data)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except CapExceededError as err:
        print(f"resource cap exceeded: {err}", file=sys.stderr)
        return 4
    except (DomainError, DecompositionError, np.linalg.LinAlgError) as err:
        print(f"numeric error: {err}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
