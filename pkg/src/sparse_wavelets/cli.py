"""Command-line interface.

Every subcommand writes its result file atomically and prints a short
``key value`` summary. Failures exit with status 1 and a single line
``error: <kind>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from . import bench as bench_mod
from .basis import BasisConfig, build_basis
from .graph import ParseError, ValidationError, load_graph, load_signal, normalize_signal
from .io import atomic_write, read_text
from .layout import format_layout, laplacian_layout, wavelet_layout
from .synth import SynthConfig, generate, write_instance
from .wavelet import (AVERAGE_ID, FormatError, compress, decompress, format_compressed,
                      format_tree, parse_compressed, ranked_coefficients, transform, with_norm)


class UsageError(Exception):
    pass


def _read_graph(path: str):
    try:
        return load_graph(read_text(path))
    except (ParseError, ValidationError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


def _read_signal(path: str, n: int):
    try:
        return load_signal(read_text(path), n)
    except (ParseError, ValidationError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


def _config(args) -> BasisConfig:
    return BasisConfig(q=args.q, algo=args.algo, beta_max=args.beta_max,
                       search_iters=args.search_iters, cheb_p=args.cheb_p,
                       power_iters=args.power_iters, seed=args.seed)


def _normalized(w):
    lo, hi = float(w.min()), float(w.max())
    return normalize_signal(w), lo, (hi - lo if hi > lo else 1.0)


def _build(g, w, args):
    tree = build_basis(g, w, _config(args))
    if args.q > 0 and tree.adapted_cut_size == 0 and g.n > 1:
        print(f"warning: no signal-adapted cut fits within q={args.q}", file=sys.stderr)
    return tree


def cmd_transform(args) -> None:
    g = _read_graph(args.graph)
    w, _, _ = _normalized(_read_signal(args.signal, g.n))
    tree = _build(g, w, args)
    coefs = transform(tree, w)
    lines = ["node\tlevel\tcoefficient\tenergy"]
    for node, value, energy in ranked_coefficients(tree, coefs):
        level = 0 if node == AVERAGE_ID else tree.nodes[node].level
        lines.append(f"{node}\t{level}\t{value:.12g}\t{energy:.12g}")
    atomic_write(args.out, "\n".join(lines) + "\n")
    if args.tree_out:
        atomic_write(args.tree_out, format_tree(tree))
    print(f"nodes {len(tree)}")
    print(f"adapted_cut_edges {tree.adapted_cut_size}")


def cmd_compress(args) -> None:
    g = _read_graph(args.graph)
    raw = _read_signal(args.signal, g.n)
    w, offset, scale = _normalized(raw)
    tree = _build(g, w, args)
    keep = g.n if args.keep is None else args.keep
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        c = compress(tree, w, keep)
    for item in caught:
        print(f"warning: {item.message}", file=sys.stderr)
    c = with_norm(c, offset, scale)
    atomic_write(args.out, format_compressed(c))
    print(f"size_bits {c.size_bits}")
    print(f"size_fraction {c.size_fraction:.12g}")
    print(f"cut_edges {c.budget_used}")
    print(f"predicted_sq_error {c.expected_sq_error:.12g}")
    print(f"predicted_relative_error {c.relative_error:.12g}")


def cmd_decompress(args) -> None:
    g = _read_graph(args.graph)
    c = parse_compressed(read_text(args.compressed))
    w = decompress(c, g)
    atomic_write(args.out, "".join(f"{x:.12g}\n" for x in w))
    print(f"n {len(w)}")


def cmd_synth(args) -> None:
    cfg = SynthConfig(n=args.n, m=args.m if args.m is not None else 3 * args.n, h=args.h,
                      alpha=args.alpha, sigma=args.sigma, seed=args.seed, levels=args.levels)
    g, w, planted = generate(cfg)
    for path in write_instance(args.out, g, w, planted):
        print(f"wrote {path}")
    print(f"planted_cut_size {planted.cut_size}")
    print(f"planted_energy {planted.energy:.12g}")


def cmd_bench(args) -> None:
    g = _read_graph(args.graph)
    w = _read_signal(args.signal, g.n)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = sorted(set(methods) - set(bench_mod.METHODS))
    if bad:
        raise UsageError(f"unknown methods: {', '.join(bad)}")
    grid = [float(f) for f in args.grid.split(",") if f.strip()]
    rows = bench_mod.run_bench(g, w, methods, grid, _config(args))
    atomic_write(args.out, bench_mod.format_bench(rows, with_seconds=not args.no_timing))
    print(f"rows {len(rows)}")


def cmd_layout(args) -> None:
    g = _read_graph(args.graph)
    if args.mode == "wavelet":
        if not args.signal:
            raise UsageError("wavelet layout needs --signal")
        w = normalize_signal(_read_signal(args.signal, g.n))
        lay = wavelet_layout(g, w, args.beta)
    else:
        lay = laplacian_layout(g)
    atomic_write(args.out, format_layout(lay))
    print(f"degenerate {int(lay.degenerate)}")


def _add_algo_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, default=0, help="edge budget for signal-adapted cuts")
    p.add_argument("--algo", choices=("swt", "fswt"), default="fswt")
    p.add_argument("--beta-max", type=float, default=1000.0)
    p.add_argument("--search-iters", type=int, default=10)
    p.add_argument("--cheb-p", type=int, default=20)
    p.add_argument("--power-iters", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparse-wavelets",
                                     description="Signal-adapted graph wavelets from sparse cuts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="build a basis and write all coefficients")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tree-out")
    _add_algo_flags(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("compress", help="keep the top coefficients of an adapted basis")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--keep", type=int, help="coefficients kept, average included (default n)")
    p.add_argument("--out", required=True)
    _add_algo_flags(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="rebuild a signal from a compressed file")
    p.add_argument("--compressed", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("synth", help="generate a planted-cut instance")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--m", type=int, help="edge count (default 3n)")
    p.add_argument("--h", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=100.0)
    p.add_argument("--sigma", type=float, help="noise std (default |mu|)")
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True, help="output prefix")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bench", help="error versus size for several methods")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--methods", default="fswt,gwt,gft")
    p.add_argument("--grid", default=",".join(str(f) for f in bench_mod.DEFAULT_GRID))
    p.add_argument("--no-timing", action="store_true", help="write 0 in the seconds column")
    p.add_argument("--out", required=True)
    _add_algo_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("layout", help="2-D coordinates for plotting")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal")
    p.add_argument("--mode", choices=("laplacian", "wavelet"), default="laplacian")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_layout)
    return parser


_KINDS = (
    (UsageError, "usage"),
    (ParseError, "parse"),
    (ValidationError, "validation"),
    (FormatError, "format"),
    (OSError, "io"),
    (ValueError, "value"),
    (RuntimeError, "runtime"),
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except Exception as exc:
        kind = next((k for cls, k in _KINDS if isinstance(exc, cls)), "internal")
        message = " ".join(str(exc).split())
        print(f"error: {kind}: {message}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
