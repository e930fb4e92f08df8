"""Coordinate systems and bases of the network state space.

The state of a two-sided network with M modes per side collects the
incoming and outgoing wave amplitudes of every mode. Throughout this
package a state is a plain complex vector of length 4M in the canonical
block order

    [V1+, V1-, V2+, V2-]

where each symbol stands for an M-vector (side s, incoming + / outgoing -).
Net voltages and currents follow per side from the wave amplitudes,

    Vs = Vs+ + Vs-        Is = Ys (Vs+ - Vs-)

with Ys the diagonal matrix of mode admittances, and conversely

    Vs+- = (Vs +- Zs Is) / 2

with Zs = inv(Ys) the diagonal matrix of mode impedances.

Each parameter family stacks four M-blocks of these quantities in the
order of its defining relation (left stack on top of right stack):

    S    [V1-, V2-, V1+, V2+]
    T    [V1+, V1-, V2-, V2+]
    ABCD [V1,  I1,  V2,  -I2]
    Z    [V1,  V2,  I1,  I2]
    Y    [I1,  I2,  V1,  V2]
    h    [V1,  I2,  I1,  V2]

A :class:`CoordSystem` holds the invertible 4M x 4M map between canonical
coordinates and one of these stackings; the maps for S and T are pure
permutations, the rest mix waves through Ys/Zs. A network of kind K with
matrix N spans a 2M-dimensional solution space; stacking N over the
2M x 2M identity in K's own coordinates yields a basis of that space
(:func:`seed_basis`), which :func:`express_in` rewrites in any other
family's coordinates. Conversion between families reduces to reading the
basis off in the target coordinates (see :mod:`mmnet.convert`).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .network import BlockMatrix, ModeSpec, NetworkMatrix, ParamKind

__all__ = ["CoordSystem", "Basis", "coord_system", "seed_basis", "express_in"]

_INVERSE_TOL = 1e-12
_RANK_TOL = 1e-9

# Canonical block indices: 0 V1+, 1 V1-, 2 V2+, 3 V2-.
_WAVE_ROWS: dict[ParamKind, tuple[int, int, int, int]] = {
    ParamKind.S: (1, 3, 0, 2),
    ParamKind.T: (0, 1, 3, 2),
}

# Net-variable stackings as (quantity, side, sign) rows; sign -1 stores -I.
_NET_ROWS: dict[ParamKind, tuple[tuple[str, int, int], ...]] = {
    ParamKind.ABCD: (("V", 1, 1), ("I", 1, 1), ("V", 2, 1), ("I", 2, -1)),
    ParamKind.Z: (("V", 1, 1), ("V", 2, 1), ("I", 1, 1), ("I", 2, 1)),
    ParamKind.Y: (("I", 1, 1), ("I", 2, 1), ("V", 1, 1), ("V", 2, 1)),
    ParamKind.H: (("V", 1, 1), ("I", 2, 1), ("I", 1, 1), ("V", 2, 1)),
}


@dataclass(frozen=True, eq=False)
class CoordSystem:
    """Invertible map between canonical state coordinates and one family's stacking."""

    kind: ParamKind
    to_canonical: np.ndarray
    from_canonical: np.ndarray

    def __post_init__(self) -> None:
        to_c = np.asarray(self.to_canonical, dtype=np.complex128).copy()
        from_c = np.asarray(self.from_canonical, dtype=np.complex128).copy()
        n = to_c.shape[0]
        if to_c.shape != (n, n) or from_c.shape != (n, n) or n % 4 != 0:
            raise ValueError("coordinate transforms must be square with side divisible by 4")
        product = to_c @ from_c
        scale = max(1.0, float(np.max(np.abs(product))))
        if np.max(np.abs(product - np.eye(n))) > _INVERSE_TOL * scale:
            raise ValueError(f"{self.kind} coordinate transforms are not mutual inverses")
        to_c.setflags(write=False)
        from_c.setflags(write=False)
        object.__setattr__(self, "to_canonical", to_c)
        object.__setattr__(self, "from_canonical", from_c)


@dataclass(frozen=True, eq=False)
class Basis:
    """2M basis vectors of a network's solution space, as 4M x 2M columns.

    ``kind`` records which family's matrix seeded the basis; ``expressed_in``
    names the coordinate system the columns are currently written in.
    """

    kind: ParamKind
    columns: np.ndarray
    expressed_in: ParamKind

    def __post_init__(self) -> None:
        cols = np.array(self.columns, dtype=np.complex128, copy=True)
        if cols.ndim != 2 or cols.shape[0] != 2 * cols.shape[1] or cols.shape[0] % 4 != 0:
            raise ValueError(f"basis columns must form a 4M x 2M matrix, got {cols.shape}")
        singular_values = np.linalg.svd(cols, compute_uv=False)
        if singular_values[-1] <= _RANK_TOL * singular_values[0]:
            raise ValueError("basis columns are numerically rank deficient")
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)

    @property
    def n_modes(self) -> int:
        return self.columns.shape[0] // 4

    def upper(self) -> np.ndarray:
        """First 2M rows (the left stack of the defining relation)."""
        return self.columns[: 2 * self.n_modes]

    def lower(self) -> np.ndarray:
        """Last 2M rows (the right stack of the defining relation)."""
        return self.columns[2 * self.n_modes :]


def _permutation_transforms(order: tuple[int, int, int, int], m: int) -> tuple[np.ndarray, np.ndarray]:
    eye = np.eye(m)
    from_c = np.zeros((4 * m, 4 * m), dtype=np.complex128)
    for row, src in enumerate(order):
        from_c[row * m : (row + 1) * m, src * m : (src + 1) * m] = eye
    return from_c.T.copy(), from_c


def _net_transforms(rows: tuple[tuple[str, int, int], ...], modes: ModeSpec) -> tuple[np.ndarray, np.ndarray]:
    m = modes.n_modes
    adm = {1: modes.admittance_matrix(1), 2: modes.admittance_matrix(2)}
    imp = {1: modes.impedance_matrix(1), 2: modes.impedance_matrix(2)}
    eye = np.eye(m)
    # Canonical wave blocks per side: (plus, minus) positions.
    wave_pos = {1: (0, 1), 2: (2, 3)}

    from_c = np.zeros((4 * m, 4 * m), dtype=np.complex128)
    position = {}
    for row, (quantity, side, sign) in enumerate(rows):
        plus, minus = wave_pos[side]
        r = slice(row * m, (row + 1) * m)
        if quantity == "V":
            from_c[r, plus * m : (plus + 1) * m] = eye
            from_c[r, minus * m : (minus + 1) * m] = eye
        else:
            from_c[r, plus * m : (plus + 1) * m] = sign * adm[side]
            from_c[r, minus * m : (minus + 1) * m] = -sign * adm[side]
        position[(quantity, side)] = (row, sign)

    to_c = np.zeros((4 * m, 4 * m), dtype=np.complex128)
    for side in (1, 2):
        v_row, _ = position[("V", side)]
        i_row, i_sign = position[("I", side)]
        plus, minus = wave_pos[side]
        half_z = 0.5 * i_sign * imp[side]
        v_cols = slice(v_row * m, (v_row + 1) * m)
        i_cols = slice(i_row * m, (i_row + 1) * m)
        to_c[plus * m : (plus + 1) * m, v_cols] = 0.5 * eye
        to_c[plus * m : (plus + 1) * m, i_cols] = half_z
        to_c[minus * m : (minus + 1) * m, v_cols] = 0.5 * eye
        to_c[minus * m : (minus + 1) * m, i_cols] = -half_z
    return to_c, from_c


@lru_cache(maxsize=4096)
def _coord_system_cached(kind: ParamKind, modes: ModeSpec) -> CoordSystem:
    if kind in _WAVE_ROWS:
        to_c, from_c = _permutation_transforms(_WAVE_ROWS[kind], modes.n_modes)
    else:
        to_c, from_c = _net_transforms(_NET_ROWS[kind], modes)
    return CoordSystem(kind, to_c, from_c)


def coord_system(kind: ParamKind, modes: ModeSpec) -> CoordSystem:
    """The coordinate system a parameter family uses, for the given mode impedances.

    ``from_canonical`` maps a canonical state [V1+, V1-, V2+, V2-] to the
    family's stacking; ``to_canonical`` is its analytic inverse. Results are
    memoized per (kind, modes) and safe for concurrent readers.
    """
    return _coord_system_cached(kind, modes)


def seed_basis(kind: ParamKind, network: NetworkMatrix) -> Basis:
    """Basis of the network's solution space, written in its own coordinates.

    The lower half (the stack the defining relation multiplies) is the 2M x 2M
    identity; the upper half is then the network matrix itself.
    """
    if network.kind != kind:
        raise ValueError(f"network holds {network.kind} parameters, expected {kind}")
    n2 = 2 * network.n_modes
    columns = np.vstack([network.matrix.data, np.eye(n2, dtype=np.complex128)])
    return Basis(kind=kind, columns=columns, expressed_in=kind)


def express_in(basis: Basis, target: ParamKind, modes: ModeSpec) -> Basis:
    """Rewrite a basis in the target family's coordinate system."""
    if basis.columns.shape[0] != 4 * modes.n_modes:
        raise ValueError(
            f"basis dimension {basis.columns.shape[0]} does not match {modes.n_modes} modes"
        )
    if target == basis.expressed_in:
        return basis
    source_cs = coord_system(basis.expressed_in, modes)
    target_cs = coord_system(target, modes)
    columns = target_cs.from_canonical @ (source_cs.to_canonical @ basis.columns)
    return Basis(kind=basis.kind, columns=columns, expressed_in=target)
