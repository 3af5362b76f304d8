"""Command-line front end: one subcommand per workflow.

Every subcommand is a thin wrapper over the library modules; with --json the
output is exactly the module-level serialization of the same call.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

import numpy as np

from .codec import (
    bench_decode,
    build_decode_table,
    decode,
    decoder_for_lengths,
    encode,
    read_container,
    write_container,
)
from .codes import LengthSet, assign_canonical, kraft_sum, truncate_length_set
from .distributions import Pmf, benford_pmf, make_pmf, pmf_from_file, zipf_pmf
from .errors import PrefixCodeError
from .few_lengths import report_to_json_list, solve_g_lengths
from .oracle import huffman
from .solver import (
    CostGrid,
    IDENTITY_COST,
    code_cost,
    dp_grids,
    dyadic_str,
    make_cost_function,
    solution_to_json_dict,
    solve_reserved,
    write_grid_csv,
)


def _parse_dist(parser: argparse.ArgumentParser, name: str) -> Pmf:
    if name == "benford":
        return benford_pmf()
    if name.startswith("zipf:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            parser.error(f"bad zipf size in {name!r}")
        if n < 2:
            parser.error("zipf needs at least 2 symbols")
        return zipf_pmf(n)
    parser.error(f"unknown distribution {name!r}; use 'benford' or 'zipf:N'")


def _parse_lambda(parser: argparse.ArgumentParser, text: str) -> LengthSet:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
        return LengthSet.from_values(values)
    except ValueError as exc:
        parser.error(f"bad --lambda {text!r}: {exc}")


def _parse_phi(parser: argparse.ArgumentParser, text: str):
    if text == "identity":
        return make_cost_function("identity")
    if text.startswith("exp:"):
        try:
            return make_cost_function("exponential", t=float(text[4:]))
        except (ValueError, PrefixCodeError) as exc:
            parser.error(f"bad --phi {text!r}: {exc}")
    if text.startswith("table:"):
        path = text[6:]
        try:
            with open(path, encoding="utf-8") as fh:
                values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read cost table {path!r}: {exc}")
        try:
            return make_cost_function("table", table=values)
        except PrefixCodeError as exc:
            parser.error(f"bad cost table {path!r}: {exc}")
    parser.error(f"bad --phi {text!r}; use identity, exp:<t>, or table:<path>")


def _load_pmf(parser: argparse.ArgumentParser, args) -> Pmf:
    if args.dist is not None:
        return _parse_dist(parser, args.dist)
    return pmf_from_file(args.pmf)


def _add_source(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--dist", help="named distribution: 'benford' or 'zipf:N'")
    group.add_argument("--pmf", help="pmf file (.csv label,weight / .json / raw bytes)")


def _add_output(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", help="write output here instead of stdout")
    sub.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sub.add_argument("--digits", type=int, default=6, help="significant digits (default 6)")


def _emit(args, payload) -> None:
    text = json.dumps(payload) + "\n" if args.json else payload
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float, digits: int) -> str:
    return f"{x:.{digits}g}"


def _length_histogram(lengths) -> str:
    counts = Counter(lengths)
    return "  ".join(f"{c}x{l}" for l, c in sorted(counts.items()))


def _solution_text(solution, digits: int) -> str:
    lines = [
        f"symbols: {solution.lengths.n}",
        f"allowed lengths used: {','.join(map(str, solution.lambda_used.values))}",
        f"codeword lengths: {_length_histogram(solution.lengths.lengths)}",
        f"cost: {_fmt(solution.cost, digits)}",
        f"kraft sum: {dyadic_str(solution.kraft)}",
    ]
    if solution.lengths.n <= 24:
        lines.append("codewords: " + " ".join(solution.codebook.bitstrings()))
    return "\n".join(lines) + "\n"


def _cmd_huffman(parser, args) -> int:
    pmf = _load_pmf(parser, args)
    lv = huffman(pmf)
    cost = code_cost(pmf, lv)
    if args.json:
        payload = {
            "lengths": list(lv.lengths),
            "expected_length": cost,
            "distinct_lengths": len(lv.distinct()),
            "kraft": dyadic_str(kraft_sum(lv)),
        }
        _emit(args, payload)
    else:
        _emit(
            args,
            f"symbols: {lv.n}\n"
            f"codeword lengths: {_length_histogram(lv.lengths)}\n"
            f"distinct lengths: {len(lv.distinct())}\n"
            f"expected length: {_fmt(cost, args.digits)}\n"
            f"kraft sum: {dyadic_str(kraft_sum(lv))}\n",
        )
    return 0


def _dump_grid(path: str, pmf: Pmf, ls: LengthSet, cost_fn) -> None:
    grid = dp_grids(pmf, truncate_length_set(ls, pmf.n), cost_fn, keep_cost_levels=True)
    with open(path, "w", encoding="utf-8") as fh:
        write_grid_csv(grid, fh)


def _cmd_reserved(parser, args, cost_fn=IDENTITY_COST) -> int:
    pmf = _load_pmf(parser, args)
    ls = _parse_lambda(parser, args.lam)
    solution = solve_reserved(pmf, ls, cost_fn)
    if args.dump_grid:
        _dump_grid(args.dump_grid, pmf, ls, cost_fn)
    if args.json:
        _emit(args, solution_to_json_dict(solution))
    else:
        _emit(args, _solution_text(solution, args.digits))
    return 0


def _cmd_quasi(parser, args) -> int:
    return _cmd_reserved(parser, args, _parse_phi(parser, args.phi))


def _cmd_glengths(parser, args) -> int:
    pmf = _load_pmf(parser, args)
    if args.g < 1:
        parser.error("--g must be at least 1")
    report = solve_g_lengths(pmf, args.g)
    if args.json:
        _emit(args, report_to_json_list(report))
    else:
        lines = [f"{'g':>3}  {'length set':<16} {'cost':<12} kraft"]
        for row in report.best_per_g:
            lines.append(
                f"{row.distinct:>3}  {','.join(map(str, row.length_set.values)):<16} "
                f"{_fmt(row.cost, args.digits):<12} {dyadic_str(row.solution.kraft)}"
            )
        lines.append(f"candidate sets tried: {report.candidates_tried}")
        _emit(args, "\n".join(lines) + "\n")
    return 0


GRID_DIGITS = 3  # grid cells always print three decimals


def render_grids(grid: CostGrid) -> str:
    """Human layout of the per-level cost grids (reachable levels only)."""
    lines = []
    for m in range(1, len(grid.levels) + 1):
        level = grid.costs[m]
        finite = np.isfinite(level)
        if not finite.any():
            continue
        lines.append(f"Level {m} (depth {grid.levels[m - 1]})")
        header = ["eta\\ups"] + [str(u) for u in range(grid.n - 1)]
        rows = [header]
        for e in range(grid.n // 2 + 1):
            row = [str(e)]
            for u in range(grid.n - 1):
                if finite[u, e]:
                    row.append(f"{level[u, e]:.3f} ({grid.predecessors[m, u, e]})")
                else:
                    row.append("inf")
            rows.append(row)
        widths = [max(len(r[j]) for r in rows) for j in range(len(header))]
        for r in rows:
            lines.append(" | ".join(cell.rjust(w) for cell, w in zip(r, widths)))
        lines.append("")
    best = grid.best
    lines.append(
        f"best finished tree: cost {best.cost:.3f} at depth {grid.levels[best.level - 1]}"
        f" (leaves above: {best.leaves_above}, spare internal nodes: {best.leftover_internal})"
    )
    return "\n".join(lines) + "\n"


def _cmd_table1(parser, args) -> int:
    pmf = benford_pmf()
    ls = LengthSet((1, 2, 4, 8))
    grid = dp_grids(pmf, truncate_length_set(ls, pmf.n), keep_cost_levels=True)
    if args.dump_grid:
        with open(args.dump_grid, "w", encoding="utf-8") as fh:
            write_grid_csv(grid, fh)
    if args.json:
        entries = [
            {"m": s.level, "upsilon": s.used, "eta": s.internal, "L": value, "pred_upsilon": pred}
            for s, value, pred in grid.finite_states()
            if s.level >= 1
        ]
        _emit(args, {"levels": list(grid.levels), "entries": entries})
    else:
        _emit(args, render_grids(grid))
    return 0


def _byte_index_maps(pmf: Pmf):
    """byte value <-> sorted-domain index, for pmfs whose labels are byte values."""
    to_index = {}
    to_byte = {}
    for i in range(pmf.n):
        label = pmf.label_for_sorted(i)
        try:
            b = int(label)
        except ValueError:
            raise PrefixCodeError(
                f"pmf label {label!r} is not a byte value; cannot code raw bytes"
            )
        if not 0 <= b <= 0xFF:
            raise PrefixCodeError(f"pmf label {label!r} is outside 0..255")
        if b in to_index:
            raise PrefixCodeError(f"pmf lists byte {b} twice")
        to_index[b] = i
        to_byte[i] = b
    return to_index, to_byte


def _cmd_encode(parser, args) -> int:
    with open(args.infile, "rb") as fh:
        data = fh.read()
    if args.pmf:
        pmf = pmf_from_file(args.pmf)
    else:
        counts = Counter(data)
        if len(counts) < 2:
            raise PrefixCodeError("input has fewer than 2 distinct byte values")
        symbols = sorted(counts)
        pmf = make_pmf(
            [counts[b] for b in symbols], normalize=True, labels=[str(b) for b in symbols]
        )
    if args.lam is not None:
        lengths = solve_reserved(pmf, _parse_lambda(parser, args.lam)).lengths
    elif args.g is not None:
        lengths = solve_g_lengths(pmf, args.g).best_per_g[-1].solution.lengths
    else:
        lengths = huffman(pmf)
    codebook = assign_canonical(lengths)
    to_index, _ = _byte_index_maps(pmf)
    try:
        indices = [to_index[b] for b in data]
    except KeyError as exc:
        raise PrefixCodeError(f"byte {exc.args[0]} absent from the supplied pmf")
    stream = encode(codebook, indices)
    write_container(args.out, lengths, stream, len(indices))
    sidecar = args.out + ".pmf.csv"
    with open(sidecar, "w", encoding="utf-8") as fh:
        for i in range(pmf.n):
            fh.write(f"{pmf.label_for_sorted(i)},{pmf.probs[i]!r}\n")
    sys.stderr.write(
        f"wrote {len(stream.data)} payload bytes for {len(data)} symbols; pmf -> {sidecar}\n"
    )
    return 0


def _cmd_decode(parser, args) -> int:
    lengths, count, payload = read_container(args.infile)
    pmf = pmf_from_file(args.pmf, fmt="csv")
    if pmf.n != lengths.n:
        raise PrefixCodeError(
            f"pmf has {pmf.n} symbols but container has {lengths.n}"
        )
    _, to_byte = _byte_index_maps(pmf)
    indices = decode(decoder_for_lengths(lengths), payload, count)
    with open(args.out, "wb") as fh:
        fh.write(bytes(to_byte[i] for i in indices))
    return 0


def _cmd_bench(parser, args) -> int:
    pmf = _load_pmf(parser, args)
    ls = _parse_lambda(parser, args.lam)
    rng = np.random.default_rng(args.seed)
    symbols = rng.choice(pmf.n, size=args.count, p=np.asarray(pmf.probs)).tolist()
    rows = []
    for name, lengths in (
        ("huffman", huffman(pmf)),
        ("reserved", solve_reserved(pmf, ls).lengths),
    ):
        codebook = assign_canonical(lengths)
        stream = encode(codebook, symbols)
        report = bench_decode(build_decode_table(codebook), stream, args.count, args.repeats)
        rows.append(
            {
                "code": name,
                "distinct_lengths": len(lengths.distinct()),
                "expected_bits": code_cost(pmf, lengths),
                "symbols_per_second_median": report.symbols_per_second_median,
                "seconds": list(report.seconds),
                "checksum": report.checksum,
            }
        )
    if args.json:
        _emit(args, rows)
    else:
        lines = [f"{'code':<10} {'lengths':>7} {'bits/sym':>10} {'sym/s (median)':>15}"]
        for r in rows:
            lines.append(
                f"{r['code']:<10} {r['distinct_lengths']:>7} "
                f"{_fmt(r['expected_bits'], args.digits):>10} "
                f"{r['symbols_per_second_median']:>15.0f}"
            )
        _emit(args, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rlpc",
        description="Optimal prefix codes with restricted codeword lengths",
    )
    subs = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = subs.add_parser("huffman", help="unrestricted optimal code for a distribution")
    _add_source(p)
    _add_output(p)
    p.set_defaults(handler=_cmd_huffman)

    p = subs.add_parser("reserved", help="optimal code with lengths from a fixed set")
    _add_source(p)
    p.add_argument("--lambda", dest="lam", required=True, help="allowed lengths, e.g. 1,2,4,8")
    p.add_argument("--dump-grid", help="also write the DP grid as CSV here")
    _add_output(p)
    p.set_defaults(handler=_cmd_reserved)

    p = subs.add_parser("quasi", help="reserved-length code under a quasiarithmetic cost")
    _add_source(p)
    p.add_argument("--lambda", dest="lam", required=True, help="allowed lengths, e.g. 1,2,4,8")
    p.add_argument("--phi", required=True, help="identity | exp:<t> | table:<path>")
    p.add_argument("--dump-grid", help="also write the DP grid as CSV here")
    _add_output(p)
    p.set_defaults(handler=_cmd_quasi)

    p = subs.add_parser("glengths", help="best codes with at most g distinct lengths")
    _add_source(p)
    p.add_argument("--g", type=int, required=True, help="maximum number of distinct lengths")
    _add_output(p)
    p.set_defaults(handler=_cmd_glengths)

    p = subs.add_parser("encode", help="compress a file of bytes into a container")
    p.add_argument("--in", dest="infile", required=True, help="input file (raw bytes)")
    p.add_argument("--out", required=True, help="output container path")
    p.add_argument("--pmf", help="pmf file; default is the input's byte histogram")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--lambda", dest="lam", help="allowed lengths, e.g. 2,4,8")
    group.add_argument("--g", type=int, help="max distinct lengths to search over")
    p.set_defaults(handler=_cmd_encode)

    p = subs.add_parser("decode", help="expand a container back into bytes")
    p.add_argument("--in", dest="infile", required=True, help="container path")
    p.add_argument("--pmf", required=True, help="sidecar pmf CSV written by encode")
    p.add_argument("--out", required=True, help="output file path")
    p.set_defaults(handler=_cmd_decode)

    p = subs.add_parser("bench", help="decode-throughput comparison: huffman vs reserved")
    _add_source(p)
    p.add_argument("--lambda", dest="lam", required=True, help="allowed lengths, e.g. 5,9,14")
    p.add_argument("--count", type=int, default=1_000_000, help="symbols per stream")
    p.add_argument("--repeats", type=int, default=5, help="decode repetitions")
    p.add_argument("--seed", type=int, default=0, help="stream generator seed")
    _add_output(p)
    p.set_defaults(handler=_cmd_bench)

    p = subs.add_parser(
        "table1",
        help="print the worked DP grids for the leading-digit example with power-of-two lengths",
    )
    p.add_argument("--dump-grid", help="also write the DP grid as CSV here")
    _add_output(p)
    p.set_defaults(handler=_cmd_table1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(parser, args)
    except BrokenPipeError:
        # downstream consumer (e.g. head) closed the pipe; nothing to report
        return 1
    except PrefixCodeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
