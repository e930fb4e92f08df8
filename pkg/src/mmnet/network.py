"""Core value types for two-sided multimode networks.

A network has two sides carrying M modes each. Every parameter matrix
(S, T, ABCD, Z, Y, h) is a 2M x 2M complex matrix viewed as four M x M
blocks; each mode has its own characteristic impedance, collected per
side in a :class:`ModeSpec`. All types here are immutable after
construction and safe to share between threads.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "ParamKind",
    "ModeSpec",
    "BlockMatrix",
    "NetworkMatrix",
]


class ParamKind(enum.Enum):
    """The six supported network-parameter families."""

    S = "S"
    T = "T"
    ABCD = "ABCD"
    Z = "Z"
    Y = "Y"
    H = "H"

    @classmethod
    def from_name(cls, name: str) -> "ParamKind":
        try:
            return cls(name.upper())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown parameter kind {name!r}; expected one of {valid}") from None

    def __str__(self) -> str:
        return self.value


def _as_complex_matrix(data, what: str) -> np.ndarray:
    arr = np.array(data, dtype=np.complex128, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{what} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _as_impedances(values, what: str) -> tuple[complex, ...]:
    out = tuple(complex(v) for v in values)
    if not out:
        raise ValueError(f"{what} must list at least one mode impedance")
    for m, z in enumerate(out, start=1):
        if not (np.isfinite(z.real) and np.isfinite(z.imag)):
            raise ValueError(f"{what} mode {m}: impedance {z} is not finite")
        if z == 0:
            raise ValueError(f"{what} mode {m}: impedance must be nonzero")
    return out


@dataclass(frozen=True)
class ModeSpec:
    """Characteristic impedances of the modes on each side, in ohms.

    Both sides carry the same number of modes M >= 1; every impedance must
    be a finite nonzero complex number (the corresponding admittances must
    exist). Values with negative real part are accepted; their physical
    interpretation is the caller's concern.
    """

    side1: tuple[complex, ...]
    side2: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "side1", _as_impedances(self.side1, "side 1"))
        object.__setattr__(self, "side2", _as_impedances(self.side2, "side 2"))
        if len(self.side1) != len(self.side2):
            raise ValueError(
                f"sides must carry equal mode counts, got {len(self.side1)} and {len(self.side2)}"
            )

    @property
    def n_modes(self) -> int:
        return len(self.side1)

    def impedances(self, side: int) -> tuple[complex, ...]:
        if side == 1:
            return self.side1
        if side == 2:
            return self.side2
        raise ValueError(f"side must be 1 or 2, got {side}")

    def impedance_matrix(self, side: int) -> np.ndarray:
        """Diagonal M x M matrix of the side's mode impedances."""
        return np.diag(np.asarray(self.impedances(side), dtype=np.complex128))

    def admittance_matrix(self, side: int) -> np.ndarray:
        """Diagonal M x M matrix of the side's mode admittances (1/Z per mode)."""
        z = np.asarray(self.impedances(side), dtype=np.complex128)
        return np.diag(1.0 / z)


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """A 2M x 2M complex matrix addressed as four M x M blocks."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = _as_complex_matrix(self.data, "block matrix")
        if arr.shape[0] % 2 != 0 or arr.shape[0] == 0:
            raise ValueError(f"block matrix side must be even and positive, got {arr.shape[0]}")
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_blocks(cls, b11, b12, b21, b22) -> "BlockMatrix":
        """Assemble from the four blocks in (11, 12, 21, 22) order."""
        blocks = {"11": b11, "12": b12, "21": b21, "22": b22}
        arrays = {}
        size = None
        for name, block in blocks.items():
            arr = np.asarray(block, dtype=np.complex128)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValueError(f"block {name} must be square, got shape {arr.shape}")
            if size is None:
                size = arr.shape[0]
            elif arr.shape[0] != size:
                raise ValueError(f"block {name} has shape {arr.shape}, expected ({size}, {size})")
            arrays[name] = arr
        return cls(np.block([[arrays["11"], arrays["12"]], [arrays["21"], arrays["22"]]]))

    @property
    def block_size(self) -> int:
        return self.data.shape[0] // 2

    def block(self, i: int, j: int) -> np.ndarray:
        """The M x M submatrix at block row i and block column j, i, j in {1, 2}."""
        if i not in (1, 2) or j not in (1, 2):
            raise ValueError(f"block indices must be 1 or 2, got ({i}, {j})")
        m = self.block_size
        return self.data[(i - 1) * m : i * m, (j - 1) * m : j * m]


@dataclass(frozen=True, eq=False)
class NetworkMatrix:
    """A parameter matrix bound to its kind, mode impedances and frequency."""

    kind: ParamKind
    matrix: BlockMatrix
    modes: ModeSpec
    frequency: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, ParamKind):
            raise TypeError(f"kind must be a ParamKind, got {type(self.kind).__name__}")
        if self.matrix.block_size != self.modes.n_modes:
            raise ValueError(
                f"matrix block size {self.matrix.block_size} does not match "
                f"mode count {self.modes.n_modes}"
            )
        if self.frequency is not None:
            f = float(self.frequency)
            if not np.isfinite(f) or f < 0:
                raise ValueError(f"frequency must be finite and >= 0, got {self.frequency}")
            object.__setattr__(self, "frequency", f)

    @property
    def n_modes(self) -> int:
        return self.modes.n_modes
