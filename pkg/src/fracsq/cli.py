"""Command line entry point: ``fracsq <command> [options]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .congruence import burnside_count_dihedral, class_sizes
from .grid import CellCapExceeded, parse_label_matrix, parse_order
from .paths import complement_path, cross_path, full_lines, lambda_path
from .report import (
    InvariantViolation,
    ScanOptions,
    atlas,
    record_for,
    records_csv,
    render,
    run_scan,
    scan_json,
    scan_text,
)
from .topology import fingerprint
from .witness import equivalence_classes

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_INVARIANT = 0, 1, 2, 3
COMMANDS = ("enumerate", "classify", "equiv", "fingerprint", "paths", "render", "atlas", "scan")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _denoms(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad denominator list {text!r}")
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("denominators must be positive integers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="grid size")
    common.add_argument("--m", type=int, help="number of digits")
    common.add_argument("--matrix", help='label matrix rows, e.g. "010,010,111"')
    common.add_argument("--max-depth", type=int, default=6, help="deepest level searched for paths")
    common.add_argument("--witness-range", type=int, default=2, help="largest |numerator| in witness entries")
    common.add_argument("--witness-denoms", type=_denoms, default=(1, 2), help='denominators, e.g. "1,2"')
    common.add_argument("--digit-order", help='digit numbering as "x,y;x,y;..." (default row-major from the bottom)')
    common.add_argument("--format", choices=("json", "csv", "text", "svg", "pbm"))
    common.add_argument("--out", help="output file (directory for atlas); stdout when omitted")
    common.add_argument("--k", type=int, default=None, help="approximation level for render/atlas/fingerprint")
    common.add_argument("--word", action="append", default=None, help="fingerprint deletion prefix (repeatable)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for scan")

    p = _Parser(prog="fracsq", description="Topology and Lipschitz classification of fractal squares.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "enumerate": "list congruence classes of (n, m)",
        "classify": "type label and certificates for one matrix or every class of (n, m)",
        "equiv": "equivalence partition with merge provenance",
        "fingerprint": "topological fingerprint of one matrix",
        "paths": "complement paths and line certificates of one matrix",
        "render": "PBM or SVG image of an approximation",
        "atlas": "render every class of (n, m), grouped by type",
        "scan": "full pipeline report for (n, m)",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return p


def _need(args, *names):
    missing = [f"--{x.replace('_', '-')}" for x in names if getattr(args, x) is None]
    if missing:
        raise UsageError(f"{args.command} needs {' '.join(missing)}")


def _matrix(args):
    _need(args, "matrix")
    try:
        return parse_label_matrix(args.matrix)
    except ValueError as exc:
        raise UsageError(str(exc))


def _nm(args):
    _need(args, "n", "m")
    if args.n < 2 or not 1 <= args.m <= args.n * args.n - 1:
        raise UsageError(f"need n >= 2 and 1 <= m <= n^2 - 1, got n={args.n} m={args.m}")
    return args.n, args.m


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _cmd_enumerate(args):
    n, m = _nm(args)
    sizes = class_sizes(n, m)
    if args.format == "json":
        return _dump({
            "n": n, "m": m, "classes": len(sizes), "dihedral_orbits": burnside_count_dihedral(n, m),
            "members": [{"canonical_key": k.hex, "matrix": list(k.digitset().label_matrix()), "size": s}
                        for k, s in sizes.items()],
        })
    if args.format == "csv":
        rows = ["canonical_key,matrix,size"]
        rows += [f"{k.hex},{'/'.join(k.digitset().label_matrix())},{s}" for k, s in sizes.items()]
        return "\n".join(rows) + "\n"
    lines = [f"({n},{m}): {len(sizes)} congruence classes, {burnside_count_dihedral(n, m)} dihedral orbits"]
    lines += [f"  {'/'.join(k.digitset().label_matrix())}  x{s}" for k, s in sizes.items()]
    return "\n".join(lines) + "\n"


def _cmd_classify(args):
    if args.matrix is not None:
        recs = [record_for(_matrix(args), args.max_depth)]
    else:
        from .congruence import enumerate_classes

        n, m = _nm(args)
        recs = [record_for(d, args.max_depth) for d in enumerate_classes(n, m)]
    if args.format == "csv":
        return records_csv(recs)
    if args.format == "text":
        return "".join(f"{'/'.join(r.digitset.label_matrix())}  {r.classification.label}\n" for r in recs)
    return _dump([r.to_dict() for r in recs])


def _cmd_equiv(args):
    n, m = _nm(args)
    part = equivalence_classes(n, m, args.max_depth, args.witness_range, args.witness_denoms)
    if not part.verify():
        raise InvariantViolation("equivalence partition failed to re-verify")
    if args.format == "text":
        lines = [f"({n},{m}): at most {len(part.classes)} Lipschitz classes"]
        for i, cls in enumerate(part.classes):
            lines.append(f"  [{i}] " + "  ".join("/".join(k.digitset().label_matrix()) for k in cls))
        return "\n".join(lines) + "\n"
    return _dump({
        "n": n, "m": m, "equiv_classes": len(part.classes),
        "partition": [[k.hex for k in cls] for cls in part.classes],
        "merges": [mg.to_dict() for mg in part.merges],
    })


def _cmd_fingerprint(args):
    d = _matrix(args)
    order = parse_order(args.digit_order) if args.digit_order else None
    fp = fingerprint(d, kmax=args.k or 4, order=order, samples=args.word)
    out = fp.to_dict()
    out["matrix"] = list(d.label_matrix())
    if args.format == "text":
        return "".join(f"{k}: {v}\n" for k, v in sorted(out.items()))
    return _dump(out)


def _cmd_paths(args):
    d = _matrix(args)
    k = args.max_depth
    v = complement_path(d, "vertical", k)
    h = complement_path(d, "horizontal", k)
    cross = cross_path(d, k)
    lam = lambda_path(d, k)
    out = {
        "matrix": list(d.label_matrix()),
        "vpath": v.to_dict() if v else None,
        "hpath": h.to_dict() if h else None,
        "cross_level": cross[0].level if cross else None,
        "lambda": lam.to_dict() if lam else None,
        "lines": [ln.to_dict() for ln in full_lines(d)],
    }
    if args.format == "text":
        lv = lambda c: c.level if c else None  # noqa: E731
        return (f"vertical: {lv(v)}\nhorizontal: {lv(h)}\ncross: {out['cross_level']}\n"
                f"lambda: {lv(lam)}\nlines: {len(out['lines'])}\n")
    return _dump(out)


def _cmd_render(args):
    d = _matrix(args)
    fmt = args.format or "pbm"
    if fmt not in ("svg", "pbm"):
        raise UsageError("render writes svg or pbm")
    return render(d, 1 if args.k is None else args.k, fmt)


def _cmd_atlas(args):
    n, m = _nm(args)
    _need(args, "out")
    fmt = args.format or "pbm"
    if fmt not in ("svg", "pbm"):
        raise UsageError("atlas writes svg or pbm panels")
    index = atlas(n, m, 4 if args.k is None else args.k, args.out, kmax=min(args.max_depth, 4), fmt=fmt)
    return "".join(f"{t}: {c}\n" for t, c in index["groups"].items())


def _cmd_scan(args):
    n, m = _nm(args)
    opts = ScanOptions(args.max_depth, args.witness_range, args.witness_denoms, args.jobs)
    res = run_scan(n, m, opts)
    if args.format == "csv":
        return records_csv(res.records)
    if args.format == "text":
        return scan_text(res)
    return scan_json(res)


def _emit(text, out, command):
    data = text if isinstance(text, bytes) else text.encode()
    if out is None or command == "atlas":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    Path(out).write_bytes(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = globals()[f"_cmd_{args.command}"]
    try:
        _emit(handler(args), args.out, args.command)
    except UsageError as exc:
        print(f"fracsq {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CellCapExceeded as exc:
        print(f"fracsq {args.command}: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as exc:
        print(f"fracsq {args.command}: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"fracsq {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
