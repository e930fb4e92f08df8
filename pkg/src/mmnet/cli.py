"""Command-line front end: convert, cascade, validate, rules.

Exit codes: 0 success, 1 I/O failure, 2 parse/format error, 3 singular
conversion (no target representation), 4 interface mismatch, 5 validation
or self-test failure. Diagnostics go to stderr; data goes to files only.
"""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cascade import InterfaceMismatch, cascade
from .convert import SingularLowerHalf, convert, defining_relation_residual
from .fileio import (
    PORT_ORDERS,
    ParseError,
    Sweep,
    UnsupportedExport,
    parse_native,
    parse_touchstone,
    write_native,
    write_touchstone,
)
from .network import BlockMatrix, ModeSpec, NetworkMatrix, ParamKind
from .reference import (
    ReferenceInapplicable,
    monomode_convert,
    random_network,
    redheffer_star,
    sample_states,
)

_KIND_NAMES = [k.value for k in ParamKind]
_TOUCHSTONE_EXT = re.compile(r"\.s\d+p$", re.IGNORECASE)
_VALIDATE_RESIDUAL_LIMIT = 1e-10


def _err(message: str) -> None:
    print(f"mmnet: {message}", file=sys.stderr)


def _sniff_format(path: str) -> str:
    return "touchstone" if _TOUCHSTONE_EXT.search(path) else "native"


def _read_sweep(path: str, in_format: str | None, port_order: str) -> Sweep:
    data = Path(path).read_bytes()
    fmt = in_format or _sniff_format(path)
    if fmt == "touchstone":
        return parse_touchstone(data, port_order=port_order)
    return parse_native(data)


def _write_sweep(sweep: Sweep, path: str, port_order: str) -> None:
    if _sniff_format(path) == "touchstone":
        payload = write_touchstone(sweep, port_order=port_order)
    else:
        payload = write_native(sweep)
    Path(path).write_bytes(payload)


def _cmd_convert(args: argparse.Namespace) -> int:
    sweep = _read_sweep(args.input, args.in_format, args.port_order)
    target = ParamKind.from_name(args.to)
    converted = []
    for point in sweep.points:
        try:
            result, report = convert(point, target)
        except SingularLowerHalf as exc:
            if args.skip_singular:
                _err(f"skipping f={point.frequency:.6e} Hz: {exc}")
                continue
            _err(f"f={point.frequency:.6e} Hz: {exc}")
            return 3
        if args.verbose:
            _err(
                f"f={point.frequency:.6e} Hz {report.source_kind}->{report.target_kind} "
                f"cond={report.lower_half_condition:.3e}"
            )
        converted.append(result)
    if not converted:
        _err("all frequency points were singular; nothing to write")
        return 3
    _write_sweep(Sweep(tuple(converted)), args.out, args.port_order)
    return 0


def _cmd_cascade(args: argparse.Namespace) -> int:
    if len(args.input) != 2:
        _err("cascade needs exactly two --in files")
        return 2
    first = _read_sweep(args.input[0], args.in_format, args.port_order)
    second = _read_sweep(args.input[1], args.in_format, args.port_order)
    if len(first) != len(second) or any(
        a.frequency != b.frequency for a, b in zip(first.points, second.points)
    ):
        raise InterfaceMismatch("the two sweeps do not share a frequency grid")
    via = ParamKind.from_name(args.via)
    target = ParamKind.from_name(args.to)
    points = []
    for a, b in zip(first.points, second.points):
        try:
            points.append(cascade(a, b, via=via, output_kind=target))
        except SingularLowerHalf as exc:
            _err(f"f={a.frequency:.6e} Hz: {exc}")
            return 3
    _write_sweep(Sweep(tuple(points)), args.out, args.port_order)
    return 0


def _validate_sweep(sweep: Sweep) -> int:
    _err(f"sweep: kind={sweep.kind} modes={sweep.n_modes} points={len(sweep)}")
    worst = 0.0
    for index, point in enumerate(sweep.points):
        states = sample_states(point, 16, seed=index)
        residual = defining_relation_residual(point, states)
        worst = max(worst, residual)
        _err(f"f={point.frequency:.6e} Hz residual={residual:.3e}")
    if worst > _VALIDATE_RESIDUAL_LIMIT:
        _err(f"FAIL: worst residual {worst:.3e} exceeds {_VALIDATE_RESIDUAL_LIMIT:.0e}")
        return 5
    _err("OK: all defining-relation residuals within tolerance")
    return 0


def _rel_diff(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(b))), 1e-30)
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / scale


def _monomode_trial(kind: ParamKind, seed: int) -> NetworkMatrix:
    """Random M=1 network at a real shared impedance, screened for conditioning."""
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        entries = rng.uniform(-1, 1, (2, 2)) + 1j * rng.uniform(-1, 1, (2, 2))
        z0 = complex(rng.uniform(10.0, 200.0))
        net = NetworkMatrix(kind, BlockMatrix(entries), ModeSpec((z0,), (z0,)))
        try:
            if all(
                convert(net, target)[1].lower_half_condition <= 1e4
                for target in ParamKind
                if target != kind
            ):
                return net
        except SingularLowerHalf:
            continue
    raise RuntimeError("could not draw a well-conditioned monomode trial")


def _self_test() -> int:
    failures = 0
    kinds = list(ParamKind)

    worst = 0.0
    for trial in range(100):
        net = _monomode_trial(kinds[trial % 6], seed=20000 + trial)
        for target in ParamKind:
            if target == net.kind:
                continue
            try:
                ref = monomode_convert(net, target)
            except ReferenceInapplicable:
                continue
            engine, _ = convert(net, target)
            worst = max(worst, _rel_diff(engine.matrix.data, ref.matrix.data))
    ok = worst <= 1e-12
    _err(f"self-test scalar-table agreement: max rel err {worst:.3e} {'ok' if ok else 'FAIL'}")
    failures += 0 if ok else 1

    worst = 0.0
    for trial in range(100):
        m = trial % 3 + 1
        a = random_network(ParamKind.S, m, seed=31000 + trial)
        b_raw = random_network(ParamKind.S, m, seed=32000 + trial)
        b = NetworkMatrix(ParamKind.S, b_raw.matrix, ModeSpec(a.modes.side2, b_raw.modes.side2))
        star = redheffer_star(a, b)
        chained = cascade(a, b, via=ParamKind.T, output_kind=ParamKind.S)
        worst = max(worst, _rel_diff(chained.matrix.data, star.matrix.data))
    ok = worst <= 1e-9
    _err(f"self-test cascade vs star product: max rel err {worst:.3e} {'ok' if ok else 'FAIL'}")
    failures += 0 if ok else 1

    worst = 0.0
    pairs = [(a, b) for a in kinds for b in kinds if a != b]
    for trial in range(100):
        source, target = pairs[trial % len(pairs)]
        net = random_network(source, trial % 4 + 1, seed=33000 + trial)
        there, _ = convert(net, target)
        back, _ = convert(there, source)
        worst = max(worst, _rel_diff(back.matrix.data, net.matrix.data))
    ok = worst <= 1e-10
    _err(f"self-test round trips: max rel err {worst:.3e} {'ok' if ok else 'FAIL'}")
    failures += 0 if ok else 1

    return 0 if failures == 0 else 5


def _cmd_validate(args: argparse.Namespace) -> int:
    if args.self_test:
        return _self_test()
    if args.input is None:
        _err("validate needs --in (or --self-test)")
        return 2
    sweep = _read_sweep(args.input, args.in_format, args.port_order)
    return _validate_sweep(sweep)


def _cmd_rules(args: argparse.Namespace) -> int:
    print("ordered conversion pairs (source -> target), all single-step:")
    count = 0
    for source in ParamKind:
        for target in ParamKind:
            if source == target:
                continue
            print(f"  {source.value:<4} -> {target.value:<4} direct")
            count += 1
    print(f"{count} pairs")
    return 0


def _add_io_options(sub: argparse.ArgumentParser, n_inputs: int = 1) -> None:
    if n_inputs == 1:
        sub.add_argument("--in", dest="input", required=True, help="input file")
    else:
        sub.add_argument(
            "--in", dest="input", action="append", default=[], help="input file (give twice)"
        )
    sub.add_argument(
        "--in-format",
        choices=["touchstone", "native"],
        default=None,
        help="input format (default: by extension, .sNp means touchstone)",
    )
    sub.add_argument(
        "--port-order",
        choices=list(PORT_ORDERS),
        default="blocked",
        help="touchstone port-to-side mapping (default blocked: ports 1..M are side 1)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmnet",
        description="Convert, cascade and validate multimode network parameter files.",
        epilog="exit codes: 0 ok, 1 I/O, 2 parse/format, 3 singular conversion, "
        "4 interface mismatch, 5 validation failure",
    )
    parser.add_argument("--version", action="version", version=f"mmnet {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    conv = commands.add_parser("convert", help="convert a sweep to another parameter kind")
    _add_io_options(conv)
    conv.add_argument("--out", required=True, help="output file (.sNp writes touchstone)")
    conv.add_argument("--to", required=True, choices=_KIND_NAMES, help="target parameter kind")
    conv.add_argument(
        "--skip-singular",
        action="store_true",
        help="drop singular frequency points with a warning instead of aborting",
    )
    conv.add_argument("--verbose", action="store_true", help="per-point diagnostics to stderr")
    conv.set_defaults(func=_cmd_convert)

    casc = commands.add_parser("cascade", help="cascade two sweeps sharing a frequency grid")
    _add_io_options(casc, n_inputs=2)
    casc.add_argument("--out", required=True, help="output file")
    casc.add_argument("--to", required=True, choices=_KIND_NAMES, help="output parameter kind")
    casc.add_argument("--via", choices=["T", "ABCD"], default="T", help="chain family to multiply in")
    casc.set_defaults(func=_cmd_cascade)

    val = commands.add_parser("validate", help="check a file's invariants and residuals")
    val.add_argument("--in", dest="input", default=None, help="input file")
    val.add_argument(
        "--in-format", choices=["touchstone", "native"], default=None, help="input format"
    )
    val.add_argument("--port-order", choices=list(PORT_ORDERS), default="blocked")
    val.add_argument(
        "--self-test", action="store_true", help="run the built-in cross-checks instead of a file"
    )
    val.set_defaults(func=_cmd_validate)

    rules = commands.add_parser("rules", help="list the supported conversion pairs")
    rules.set_defaults(func=_cmd_rules)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _err(f"parse error: {exc}")
        return 2
    except UnsupportedExport as exc:
        _err(f"export error: {exc}")
        return 2
    except SingularLowerHalf as exc:
        _err(str(exc))
        return 3
    except InterfaceMismatch as exc:
        _err(f"interface mismatch: {exc}")
        return 4
    except OSError as exc:
        _err(str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
