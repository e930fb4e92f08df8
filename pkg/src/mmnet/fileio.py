"""Reading and writing frequency-swept network data.

Two formats are supported.

**Touchstone v1** (``.s2p`` / ``.sNp``), S-parameters only: option line
``# <unit> S <format> R <z0>`` with units Hz/kHz/MHz/GHz and formats
RI/MA/DB, ``!`` comments, and the v1 data layout (2-port column order
S11 S21 S12 S22; for more ports row-major with each matrix row starting a
new line, at most four value pairs per line). The N ports of a file map to
the two network sides by the *blocked* convention: ports 1..M become side 1
and ports M+1..2M become side 2, so N must be even. The *interleaved*
alternative (odd ports to side 1, even ports to side 2) is selectable; the
same choice must be used when exporting to preserve port order.

**Native format** (``mmnet v1``), any parameter kind and complex per-mode
impedances: line-oriented UTF-8 with ``#`` comments,

    mmnet v1
    kind S
    modes 2
    z1 5e1+0e0j 7.5e1+0e0j
    z2 5e1+0e0j 7.5e1+0e0j
    f 1e9
    <2M lines of 2M whitespace-separated complex entries a+bj>
    f 2e9
    ...

Complex literals carry no internal whitespace. Writers emit 17 significant
digits (floats round-trip exactly), ``\\n`` line endings, and are
byte-deterministic; frequencies must be strictly increasing.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .network import BlockMatrix, ModeSpec, NetworkMatrix, ParamKind

__all__ = [
    "Sweep",
    "ParseError",
    "UnsupportedTopology",
    "UnsupportedParameterType",
    "UnsupportedExport",
    "parse_touchstone",
    "write_touchstone",
    "parse_native",
    "write_native",
]

PORT_ORDERS = ("blocked", "interleaved")

_UNIT_FACTORS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_TOUCHSTONE_PARAMS = ("s", "z", "y", "h", "g")
_PAIRS_PER_LINE = 4


class ParseError(ValueError):
    """Malformed input; ``line`` holds the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnsupportedTopology(ParseError):
    """The file's port count cannot be split into two equal sides."""


class UnsupportedParameterType(ParseError):
    """Touchstone data other than S-parameters."""


class UnsupportedExport(ValueError):
    """The sweep cannot be represented in the requested format."""


@dataclass(frozen=True)
class Sweep:
    """Frequency-ordered points sharing one kind and one set of mode impedances."""

    points: tuple[NetworkMatrix, ...]

    def __post_init__(self) -> None:
        points = tuple(self.points)
        if not points:
            raise ValueError("a sweep needs at least one frequency point")
        first = points[0]
        previous = -math.inf
        for p in points:
            if p.kind != first.kind:
                raise ValueError(f"mixed kinds in sweep: {first.kind} and {p.kind}")
            if p.modes != first.modes:
                raise ValueError("all sweep points must share the same mode impedances")
            if p.frequency is None:
                raise ValueError("every sweep point needs a frequency")
            if p.frequency <= previous:
                raise ValueError(
                    f"frequencies must be strictly increasing, got {p.frequency} after {previous}"
                )
            previous = p.frequency
        object.__setattr__(self, "points", points)

    @property
    def kind(self) -> ParamKind:
        return self.points[0].kind

    @property
    def modes(self) -> ModeSpec:
        return self.points[0].modes

    @property
    def n_modes(self) -> int:
        return self.points[0].n_modes

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([p.frequency for p in self.points])

    def __len__(self) -> int:
        return len(self.points)


def _decode(data) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    return str(data)


def _fmt(value: float) -> str:
    return format(float(value), ".16e")


def _fmt_complex(value: complex) -> str:
    return f"{value.real:.16e}{value.imag:+.16e}j"


def _port_permutation(port_order: str, n_ports: int) -> np.ndarray:
    """File-port index (0-based) occupying each block position."""
    if port_order == "blocked":
        return np.arange(n_ports)
    if port_order == "interleaved":
        return np.concatenate([np.arange(0, n_ports, 2), np.arange(1, n_ports, 2)])
    raise ValueError(f"port_order must be one of {PORT_ORDERS}, got {port_order!r}")


# -- Touchstone ------------------------------------------------------------

def _parse_option_line(line: str, line_no: int) -> tuple[float, str, float]:
    unit = "ghz"
    fmt = "ma"
    param = "s"
    resistance = 50.0
    tokens = line[1:].lower().split()
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if token in _UNIT_FACTORS:
            unit = token
        elif token in ("ri", "ma", "db"):
            fmt = token
        elif token in _TOUCHSTONE_PARAMS:
            param = token
        elif token == "r":
            if i + 1 >= len(tokens):
                raise ParseError("option line: R without a resistance value", line_no)
            try:
                resistance = float(tokens[i + 1])
            except ValueError:
                raise ParseError(
                    f"option line: bad reference resistance {tokens[i + 1]!r}", line_no
                ) from None
            i += 1
        else:
            raise ParseError(f"option line: unrecognized token {token!r}", line_no)
        i += 1
    if param != "s":
        raise UnsupportedParameterType(
            f"only S-parameter Touchstone data is supported, got type {param.upper()!r}", line_no
        )
    if not math.isfinite(resistance) or resistance <= 0:
        raise ParseError(f"reference resistance must be positive, got {resistance}", line_no)
    return _UNIT_FACTORS[unit], fmt, resistance


def _pair_to_complex(x: float, y: float, fmt: str) -> complex:
    if fmt == "ri":
        return complex(x, y)
    if fmt == "ma":
        return x * complex(math.cos(math.radians(y)), math.sin(math.radians(y)))
    return 10.0 ** (x / 20.0) * complex(math.cos(math.radians(y)), math.sin(math.radians(y)))


def parse_touchstone(data, *, port_order: str = "blocked") -> Sweep:
    """Parse Touchstone v1 text into an S-parameter sweep.

    The port count is inferred from the data layout (a frequency line has an
    odd token count, continuation lines even) and must be even; all mode
    impedances are the option line's reference resistance.
    """
    perm_check = port_order  # validate early, before any I/O work
    _port_permutation(perm_check, 2)
    text = _decode(data)
    option = None
    option_line = 0
    blocks: list[tuple[int, list[float]]] = []
    last_line = 0
    for line_no, raw in enumerate(text.splitlines(), 1):
        last_line = line_no
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            if option is not None:
                raise ParseError("multiple option lines", line_no)
            if blocks:
                raise ParseError("option line must precede all data", line_no)
            option = _parse_option_line(line, line_no)
            option_line = line_no
            continue
        if option is None:
            raise ParseError("data before option line", line_no)
        values = []
        for token in line.split():
            try:
                values.append(float(token))
            except ValueError:
                raise ParseError(f"non-numeric token {token!r}", line_no) from None
        if len(values) % 2 == 1:
            blocks.append((line_no, values))
        else:
            if not blocks:
                raise ParseError("matrix data before any frequency value", line_no)
            blocks[-1][1].extend(values)
    if option is None:
        raise ParseError("no option line found", last_line if last_line else None)
    if not blocks:
        raise ParseError("no data after option line", option_line)

    unit_factor, fmt, resistance = option
    expected = len(blocks[0][1])
    n_pairs, remainder = divmod(expected - 1, 2)
    n_ports = math.isqrt(n_pairs) if n_pairs > 0 else 0
    if remainder or n_ports * n_ports != n_pairs or n_ports == 0:
        raise ParseError(
            f"cannot infer a port count from {expected - 1} values per frequency block",
            blocks[0][0],
        )
    if n_ports % 2 != 0:
        raise UnsupportedTopology(
            f"{n_ports}-port data cannot be split into two equal sides", blocks[0][0]
        )
    perm = _port_permutation(port_order, n_ports)
    n_modes = n_ports // 2
    impedances = (complex(resistance),) * n_modes
    modes = ModeSpec(impedances, impedances)

    points = []
    previous = -math.inf
    for line_no, values in blocks:
        if len(values) != expected:
            raise ParseError(
                f"frequency block has {len(values) - 1} values, expected {expected - 1}",
                line_no,
            )
        frequency = values[0] * unit_factor
        if frequency <= previous:
            raise ParseError("frequencies must be strictly increasing", line_no)
        previous = frequency
        entries = [
            _pair_to_complex(values[k], values[k + 1], fmt) for k in range(1, expected, 2)
        ]
        if n_ports == 2:
            s11, s21, s12, s22 = entries
            matrix = np.array([[s11, s12], [s21, s22]], dtype=np.complex128)
        else:
            matrix = np.array(entries, dtype=np.complex128).reshape(n_ports, n_ports)
        matrix = matrix[np.ix_(perm, perm)]
        try:
            points.append(NetworkMatrix(ParamKind.S, BlockMatrix(matrix), modes, frequency))
        except ValueError as exc:
            raise ParseError(str(exc), line_no) from None
    return Sweep(tuple(points))


def write_touchstone(sweep: Sweep, *, port_order: str = "blocked") -> bytes:
    """Serialize an S-parameter sweep as Touchstone v1 (Hz, RI), byte-deterministic.

    Requires kind S and one shared real mode impedance; anything else raises
    :class:`UnsupportedExport`.
    """
    if sweep.kind != ParamKind.S:
        raise UnsupportedExport(f"Touchstone holds S-parameters only, sweep is {sweep.kind}")
    impedances = sweep.modes.side1 + sweep.modes.side2
    z0 = impedances[0]
    if z0.imag != 0.0 or z0.real <= 0.0 or any(z != z0 for z in impedances):
        raise UnsupportedExport(
            "Touchstone export needs one shared real positive mode impedance"
        )
    n_ports = 2 * sweep.n_modes
    perm = _port_permutation(port_order, n_ports)
    inverse = np.argsort(perm)
    lines = [f"# HZ S RI R {z0.real:.17g}"]
    for point in sweep.points:
        matrix = point.matrix.data[np.ix_(inverse, inverse)]
        if n_ports == 2:
            ordered = [matrix[0, 0], matrix[1, 0], matrix[0, 1], matrix[1, 1]]
            parts = [_fmt(point.frequency)]
            parts.extend(f"{_fmt(v.real)} {_fmt(v.imag)}" for v in ordered)
            lines.append(" ".join(parts))
        else:
            for row in range(n_ports):
                pairs = [f"{_fmt(v.real)} {_fmt(v.imag)}" for v in matrix[row]]
                for start in range(0, len(pairs), _PAIRS_PER_LINE):
                    chunk = " ".join(pairs[start : start + _PAIRS_PER_LINE])
                    if row == 0 and start == 0:
                        lines.append(f"{_fmt(point.frequency)} {chunk}")
                    else:
                        lines.append(chunk)
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- Native format ---------------------------------------------------------

_NATIVE_MAGIC = "mmnet v1"
_COMPLEX_RE = re.compile(r"^[^\s()]+$")


def _parse_complex(token: str, line_no: int) -> complex:
    if not _COMPLEX_RE.match(token):
        raise ParseError(f"bad complex literal {token!r}", line_no)
    try:
        value = complex(token)
    except ValueError:
        raise ParseError(f"bad complex literal {token!r}", line_no) from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ParseError(f"non-finite value {token!r}", line_no)
    return value


def _native_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line_no, line


def parse_native(data) -> Sweep:
    """Parse the native ``mmnet v1`` format into a sweep of any kind."""
    text = _decode(data)
    lines = _native_lines(text)
    last_line = 0

    def next_line(what: str) -> tuple[int, str]:
        nonlocal last_line
        try:
            line_no, line = next(lines)
        except StopIteration:
            raise ParseError(f"unexpected end of input, expected {what}", last_line) from None
        last_line = line_no
        return line_no, line

    line_no, line = next_line("header")
    if line != _NATIVE_MAGIC:
        raise ParseError(f"expected header {_NATIVE_MAGIC!r}, got {line!r}", line_no)

    line_no, line = next_line("kind directive")
    fields = line.split()
    if len(fields) != 2 or fields[0] != "kind":
        raise ParseError(f"expected 'kind <{'|'.join(k.value for k in ParamKind)}>'", line_no)
    try:
        kind = ParamKind.from_name(fields[1])
    except ValueError as exc:
        raise ParseError(str(exc), line_no) from None

    line_no, line = next_line("modes directive")
    fields = line.split()
    if len(fields) != 2 or fields[0] != "modes" or not fields[1].isdigit() or int(fields[1]) < 1:
        raise ParseError("expected 'modes <M>' with M >= 1", line_no)
    n_modes = int(fields[1])

    sides = []
    for name in ("z1", "z2"):
        line_no, line = next_line(f"{name} directive")
        fields = line.split()
        if not fields or fields[0] != name:
            raise ParseError(f"expected '{name} <{n_modes} impedances>'", line_no)
        if len(fields) - 1 != n_modes:
            raise ParseError(
                f"{name} lists {len(fields) - 1} impedances, expected {n_modes}", line_no
            )
        sides.append(tuple(_parse_complex(t, line_no) for t in fields[1:]))
    try:
        modes = ModeSpec(sides[0], sides[1])
    except ValueError as exc:
        raise ParseError(str(exc), line_no) from None

    side = 2 * n_modes
    points = []
    previous = -math.inf
    while True:
        try:
            f_line_no, line = next(lines)
        except StopIteration:
            break
        last_line = f_line_no
        fields = line.split()
        if len(fields) != 2 or fields[0] != "f":
            raise ParseError("expected 'f <hertz>'", f_line_no)
        try:
            frequency = float(fields[1])
        except ValueError:
            raise ParseError(f"bad frequency {fields[1]!r}", f_line_no) from None
        if not math.isfinite(frequency) or frequency < 0:
            raise ParseError(f"frequency must be finite and >= 0, got {fields[1]}", f_line_no)
        if frequency <= previous:
            raise ParseError("frequencies must be strictly increasing", f_line_no)
        previous = frequency
        rows = []
        for _ in range(side):
            row_line_no, row_line = next_line("matrix row")
            tokens = row_line.split()
            if len(tokens) != side:
                raise ParseError(
                    f"matrix row has {len(tokens)} entries, expected {side}", row_line_no
                )
            rows.append([_parse_complex(t, row_line_no) for t in tokens])
        points.append(
            NetworkMatrix(kind, BlockMatrix(np.array(rows, dtype=np.complex128)), modes, frequency)
        )
    if not points:
        raise ParseError("no frequency blocks", last_line)
    return Sweep(tuple(points))


def write_native(sweep: Sweep) -> bytes:
    """Serialize any sweep in the native format, byte-deterministic."""
    lines = [
        _NATIVE_MAGIC,
        f"kind {sweep.kind.value}",
        f"modes {sweep.n_modes}",
        "z1 " + " ".join(_fmt_complex(z) for z in sweep.modes.side1),
        "z2 " + " ".join(_fmt_complex(z) for z in sweep.modes.side2),
    ]
    for point in sweep.points:
        lines.append(f"f {_fmt(point.frequency)}")
        for row in point.matrix.data:
            lines.append(" ".join(_fmt_complex(v) for v in row))
    return ("\n".join(lines) + "\n").encode("utf-8")
