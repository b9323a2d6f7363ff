"""Command-line front end.

Subcommands: ``validate`` (symplectic residual report), ``element`` (single
amplitudes as JSON lines), ``block`` (dense element blocks plus column norms),
``verify`` (closed-form path against the truncated-Fock oracle), ``profile``
(intensity sticks over total photon number) and ``random`` (reproducible
random transform files).

Exit codes: 0 success, 1 malformed input, 2 validation failure, 3 resource or
truncation guard.
"""

import argparse
import csv
import io
import itertools
import json
import sys

import numpy as np

from . import __version__
from .bogoliubov import (
    bloch_messiah,
    from_elementary,
    ops_from_dict,
    random_transform,
    transform_from_dict,
    transform_to_dict,
    validate_symplectic,
    SYMPLECTIC_TOL,
)
from .exceptions import (
    InvalidTransformError,
    ResourceLimitError,
    ShapeError,
    TruncationRiskError,
)
from .husimi import (
    element_block,
    gaussian_qfunction,
    matrix_element,
    quadrature_element,
    quadrature_qfunction,
)
from .oracle import oracle_element, oracle_quadrature_element, transform_matrix


class UsageError(Exception):
    """Bad command line or malformed input file."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_index(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad index list {text!r}: {exc}") from exc


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _sym_tol(args) -> float:
    tol = getattr(args, "tol", None)
    return SYMPLECTIC_TOL if tol is None else tol


def _load_transform(args, validate: bool = True):
    """Resolve the single transform source; returns (transform, ops_or_None)."""
    if bool(args.transform) == bool(args.ops):
        raise UsageError("exactly one of --transform or --ops is required")
    tol = _sym_tol(args)
    if args.transform:
        data = _load_json(args.transform)
        try:
            return transform_from_dict(data, tol=tol, validate=validate), None
        except (ValueError, ShapeError) as exc:
            if isinstance(exc, InvalidTransformError):
                raise
            raise UsageError(f"bad transform file: {exc}") from exc
    data = _load_json(args.ops)
    try:
        ops = ops_from_dict(data)
        return from_elementary(ops, tol=tol), ops
    except (ValueError, ShapeError) as exc:
        if isinstance(exc, InvalidTransformError):
            raise
        raise UsageError(f"bad operations file: {exc}") from exc


def _write(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _bounded_indices(n_modes: int, max_total: int):
    """All occupation vectors with total at most ``max_total``, lexicographic."""
    for occ in itertools.product(range(max_total + 1), repeat=n_modes):
        if sum(occ) <= max_total:
            yield occ


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    transform, _ = _load_transform(args, validate=False)
    tol = _sym_tol(args)
    report = validate_symplectic(transform, tol=tol)
    payload = {
        "pass": report.passed,
        "tolerance": tol,
        "residuals": report.residuals(),
    }
    _write(args, json.dumps(payload, indent=2) + "\n")
    return 0 if report.passed else 2


def cmd_element(args) -> int:
    transform, _ = _load_transform(args)
    ms = [_parse_index(x) for x in args.m]
    ns = [_parse_index(x) for x in args.n]
    ks = [_parse_index(x) for x in args.k] if args.k else None
    if len(ms) != len(ns) or (ks is not None and len(ks) != len(ms)):
        raise UsageError("--m, --n (and --k when given) must repeat the same number of times")
    if ks is not None and not args.kind:
        raise UsageError("--k requires --kind position|momentum")

    husimi = gaussian_qfunction(transform)
    quad = quadrature_qfunction(transform, args.kind) if ks is not None else None
    n_modes = transform.n_modes
    rows = []
    for i, (m, n) in enumerate(zip(ms, ns)):
        k = ks[i] if ks is not None else (0,) * n_modes
        if ks is not None:
            value = quadrature_element(quad, m, n, k)
        else:
            value = matrix_element(husimi, m, n)
        row = {"m": list(m), "n": list(n), "k": list(k)}
        if ks is not None:
            row["kind"] = args.kind
        row["re"] = value.real
        row["im"] = value.imag
        rows.append(row)

    if (args.format or "json") == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        header = [f"m_{j+1}" for j in range(n_modes)]
        header += [f"n_{j+1}" for j in range(n_modes)]
        header += [f"k_{j+1}" for j in range(n_modes)] + ["re", "im"]
        writer.writerow(header)
        for row in rows:
            writer.writerow(row["m"] + row["n"] + row["k"] + [repr(row["re"]), repr(row["im"])])
        _write(args, buf.getvalue())
    else:
        _write(args, "".join(json.dumps(row) + "\n" for row in rows))
    return 0


def cmd_block(args) -> int:
    transform, _ = _load_transform(args)
    n_modes = transform.n_modes
    max_m = _parse_index(args.max_m)
    max_n = _parse_index(args.max_n)
    husimi = gaussian_qfunction(transform)
    block = element_block(husimi, max_m, max_n, lattice_cap=args.lattice_cap)

    m_ranges = [range(b + 1) for b in max_m]
    n_ranges = [range(b + 1) for b in max_n]
    col_norms = {
        n: float(sum(abs(block[m + n]) ** 2 for m in itertools.product(*m_ranges)))
        for n in itertools.product(*n_ranges)
    }

    if (args.format or "csv") == "json":
        payload = {
            "max_m": list(max_m),
            "max_n": list(max_n),
            "elements": [
                {
                    "m": list(m),
                    "n": list(n),
                    "re": float(block[m + n].real),
                    "im": float(block[m + n].imag),
                }
                for m in itertools.product(*m_ranges)
                for n in itertools.product(*n_ranges)
            ],
            "column_norms": [
                {"n": list(n), "norm_sq": v} for n, v in col_norms.items()
            ],
        }
        _write(args, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        header = [f"m_{j+1}" for j in range(n_modes)]
        header += [f"n_{j+1}" for j in range(n_modes)] + ["re", "im"]
        writer.writerow(header)
        for m in itertools.product(*m_ranges):
            for n in itertools.product(*n_ranges):
                z = complex(block[m + n])
                writer.writerow(list(m) + list(n) + [repr(z.real), repr(z.imag)])
        for n, v in col_norms.items():
            buf.write(f"# column_norm n={','.join(str(x) for x in n)}: {v!r}\n")
        _write(args, buf.getvalue())
    return 0


def cmd_verify(args) -> int:
    transform, ops = _load_transform(args)
    if ops is None:
        ops = bloch_messiah(transform).to_ops(transform.t)
    n_modes = transform.n_modes

    truncated = transform_matrix(ops, args.cutoff)
    husimi = gaussian_qfunction(transform)
    quads = {
        kind: quadrature_qfunction(transform, kind) for kind in ("position", "momentum")
    } if args.quadrature else {}

    pairs = [
        (m, n)
        for m in _bounded_indices(n_modes, args.max_photons)
        for n in _bounded_indices(n_modes, args.max_photons)
        if sum(m) + sum(n) <= args.max_photons
    ]
    closed = np.array([matrix_element(husimi, m, n) for m, n in pairs])
    brute = np.array([oracle_element(truncated, m, n) for m, n in pairs])

    anchor = int(np.argmax(np.abs(closed)))
    phase = brute[anchor] / closed[anchor]
    records = []
    deviation = float(np.max(np.abs(brute - phase * closed)))
    if args.details:
        for (m, n), o, c in zip(pairs, brute, closed):
            records.append(
                {
                    "m": list(m), "n": list(n),
                    "closed": [c.real, c.imag],
                    "oracle": [o.real, o.imag],
                    "abs_dev": float(abs(o - phase * c)),
                }
            )

    for kind, quad in quads.items():
        for k in _bounded_indices(n_modes, args.max_quadrature):
            if sum(k) == 0:
                continue
            for m, n in pairs:
                if np.any(np.asarray(n) + np.asarray(k) >= args.cutoff):
                    continue
                c = quadrature_element(quad, m, n, k)
                o = oracle_quadrature_element(truncated, m, n, k, kind)
                deviation = max(deviation, float(abs(o - phase * c)))

    dev_tol = 1e-7 if args.tol is None else args.tol
    passed = bool(deviation <= dev_tol and abs(abs(phase) - 1.0) <= dev_tol)
    payload = {
        "pass": passed,
        "tolerance": dev_tol,
        "max_abs_deviation": deviation,
        "phase": [float(phase.real), float(phase.imag)],
        "phase_modulus": float(abs(phase)),
        "n_elements": len(pairs),
        "cutoff": args.cutoff,
    }
    if args.details:
        payload["elements"] = records
    _write(args, json.dumps(payload, indent=2) + "\n")
    return 0 if passed else 2


def cmd_profile(args) -> int:
    transform, _ = _load_transform(args)
    n_modes = transform.n_modes
    initial = _parse_index(args.n) if args.n else (0,) * n_modes
    if len(initial) != n_modes:
        raise UsageError(f"--n must have {n_modes} entries")
    husimi = gaussian_qfunction(transform)
    bound = (args.max_photons,) * n_modes
    block = element_block(husimi, bound, initial, lattice_cap=args.lattice_cap)

    sticks = []
    for m in _bounded_indices(n_modes, args.max_photons):
        amp = block[m + initial]
        sticks.append((sum(m), m, float(abs(amp) ** 2)))
    sticks.sort(key=lambda item: (item[0], item[1]))

    if (args.format or "csv") == "json":
        payload = [
            {"total": total, "m": list(m), "intensity": inten}
            for total, m, inten in sticks
        ]
        _write(args, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["total"] + [f"m_{j+1}" for j in range(n_modes)] + ["intensity"])
        for total, m, inten in sticks:
            writer.writerow([total] + list(m) + [repr(inten)])
        _write(args, buf.getvalue())
    return 0


def cmd_random(args) -> int:
    transform = random_transform(args.n_modes, args.max_squeeze, args.max_displacement, args.seed)
    _write(args, json.dumps(transform_to_dict(transform), indent=2) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bogofock", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    source = _Parser(add_help=False)
    source.add_argument("--transform", metavar="FILE", help="transform JSON file (S/R/t)")
    source.add_argument("--ops", metavar="FILE", help="elementary-operation JSON file")
    source.add_argument("--tol", type=float, default=None,
                        help="tolerance (symplectic residuals; on verify, the deviation bound)")
    source.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    source.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default depends on the command)")

    p = sub.add_parser("validate", parents=[source], help="symplectic residual report")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("element", parents=[source], help="individual matrix elements")
    p.add_argument("--m", action="append", required=True, metavar="I,J,...",
                   help="output (bra) occupation; repeatable")
    p.add_argument("--n", action="append", required=True, metavar="I,J,...",
                   help="input (ket) occupation; repeatable")
    p.add_argument("--k", action="append", metavar="I,J,...",
                   help="quadrature powers; repeatable, requires --kind")
    p.add_argument("--kind", choices=("position", "momentum"))
    p.set_defaults(func=cmd_element)

    p = sub.add_parser("block", parents=[source], help="dense block of elements")
    p.add_argument("--max-m", required=True, metavar="I,J,...", help="per-mode bra bounds")
    p.add_argument("--max-n", required=True, metavar="I,J,...", help="per-mode ket bounds")
    p.add_argument("--lattice-cap", type=int, default=2_000_000)
    p.set_defaults(func=cmd_block)

    p = sub.add_parser("verify", parents=[source],
                       help="compare the closed-form path against the truncated-Fock oracle")
    p.add_argument("--cutoff", type=int, default=16, help="oracle Fock cutoff (default %(default)s)")
    p.add_argument("--max-photons", type=int, default=6,
                   help="compare all (m, n) with total photons at most this")
    p.add_argument("--quadrature", action="store_true",
                   help="also compare position/momentum quadrature elements")
    p.add_argument("--max-quadrature", type=int, default=2, help="total quadrature power bound")
    p.add_argument("--details", action="store_true", help="include a per-element table")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("profile", parents=[source],
                       help="intensity sticks |<m|O|n>|^2 over total photon number")
    p.add_argument("--n", metavar="I,J,...", help="initial occupation (default vacuum)")
    p.add_argument("--max-photons", type=int, required=True)
    p.add_argument("--lattice-cap", type=int, default=2_000_000)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("random", help="emit a reproducible random transform")
    p.add_argument("--n-modes", type=int, required=True)
    p.add_argument("--max-squeeze", type=float, default=0.8)
    p.add_argument("--max-displacement", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvalidTransformError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2
    except (TruncationRiskError, ResourceLimitError) as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 3
    except (ShapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
