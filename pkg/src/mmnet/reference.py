"""Independent reference implementations and reproducible test-data generators.

The conversion and cascade engines are validated against routes that share
none of their machinery:

* :func:`monomode_convert` - the classical closed-form scalar two-port
  conversion tables, applicable at M = 1 with one equal, real reference
  impedance on all modes (the assumption those tables make).
* :func:`redheffer_star` - direct composition of two scattering matrices
  via the star-product block formulas.

Both are written in plain numpy with no use of the coordinate-system or
basis code. :func:`random_network` and :func:`sample_states` provide
seed-reproducible inputs; the generator is numpy's ``default_rng`` (PCG64),
whose streams are stable across platforms and numpy releases.
"""
from __future__ import annotations

import numpy as np

from .network import BlockMatrix, ModeSpec, NetworkMatrix, ParamKind
from .cascade import InterfaceMismatch
from .statespace import coord_system, express_in, seed_basis

__all__ = [
    "ReferenceInapplicable",
    "SingularJunction",
    "GenerationFailed",
    "monomode_convert",
    "redheffer_star",
    "random_network",
    "sample_states",
]

_REJECTION_BUDGET = 1000
_JUNCTION_CONDITION_LIMIT = 1e12


class ReferenceInapplicable(ValueError):
    """The closed-form scalar tables do not cover this input."""


class SingularJunction(ValueError):
    """The star-product junction operator is not invertible."""


class GenerationFailed(RuntimeError):
    """Rejection sampling exhausted its draw budget."""


# Scalar two-port tables at one equal real reference impedance z0 (y0 = 1/z0).
# Source entries are (a, b, c, d) = (m11, m12, m21, m22), det = a*d - b*c.
# Each rule returns four numerators and their common denominator.

def _s_to_t(a, b, c, d, det, z0, y0):
    return (1, -d, a, -det), c


def _t_to_s(a, b, c, d, det, z0, y0):
    return (c, det, 1, -b), a


def _s_to_z(a, b, c, d, det, z0, y0):
    den = (1 - a) * (1 - d) - b * c
    return (z0 * ((1 + a) * (1 - d) + b * c), 2 * z0 * b, 2 * z0 * c,
            z0 * ((1 - a) * (1 + d) + b * c)), den


def _z_to_s(a, b, c, d, det, z0, y0):
    den = (a + z0) * (d + z0) - b * c
    return ((a - z0) * (d + z0) - b * c, 2 * z0 * b, 2 * z0 * c,
            (a + z0) * (d - z0) - b * c), den


def _s_to_y(a, b, c, d, det, z0, y0):
    den = (1 + a) * (1 + d) - b * c
    return (y0 * ((1 - a) * (1 + d) + b * c), -2 * y0 * b, -2 * y0 * c,
            y0 * ((1 + a) * (1 - d) + b * c)), den


def _y_to_s(a, b, c, d, det, z0, y0):
    den = (1 + z0 * a) * (1 + z0 * d) - z0 * z0 * b * c
    return ((1 - z0 * a) * (1 + z0 * d) + z0 * z0 * b * c, -2 * z0 * b, -2 * z0 * c,
            (1 + z0 * a) * (1 - z0 * d) + z0 * z0 * b * c), den


def _s_to_abcd(a, b, c, d, det, z0, y0):
    return ((1 + a) * (1 - d) + b * c, z0 * ((1 + a) * (1 + d) - b * c),
            y0 * ((1 - a) * (1 - d) - b * c), (1 - a) * (1 + d) + b * c), 2 * c


def _abcd_to_s(a, b, c, d, det, z0, y0):
    den = a + b * y0 + c * z0 + d
    return (a + b * y0 - c * z0 - d, 2 * det, 2, -a + b * y0 - c * z0 + d), den


def _s_to_h(a, b, c, d, det, z0, y0):
    den = (1 - a) * (1 + d) + b * c
    return (z0 * ((1 + a) * (1 + d) - b * c), 2 * b, -2 * c,
            y0 * ((1 - a) * (1 - d) - b * c)), den


def _h_to_s(a, b, c, d, det, z0, y0):
    den = (a + z0) * (1 + d * z0) - b * c * z0
    return ((a - z0) * (1 + d * z0) - b * c * z0, 2 * b * z0, -2 * c * z0,
            (a + z0) * (1 - d * z0) + b * c * z0), den


def _invert(a, b, c, d, det, z0, y0):
    return (d, -b, -c, a), det


def _z_abcd(a, b, c, d, det, z0, y0):
    return (a, det, 1, d), c


def _y_to_abcd(a, b, c, d, det, z0, y0):
    return (-d, -1, -det, -a), c


def _abcd_to_y(a, b, c, d, det, z0, y0):
    return (d, -det, -1, a), b


def _z_h(a, b, c, d, det, z0, y0):
    return (det, b, -c, 1), d


def _y_h(a, b, c, d, det, z0, y0):
    return (1, -b, c, det), a


def _abcd_to_h(a, b, c, d, det, z0, y0):
    return (b, det, -1, c), d


def _h_to_abcd(a, b, c, d, det, z0, y0):
    return (-det, -a, -d, -1), c


_SCALAR_RULES = {
    (ParamKind.S, ParamKind.T): _s_to_t,
    (ParamKind.T, ParamKind.S): _t_to_s,
    (ParamKind.S, ParamKind.Z): _s_to_z,
    (ParamKind.Z, ParamKind.S): _z_to_s,
    (ParamKind.S, ParamKind.Y): _s_to_y,
    (ParamKind.Y, ParamKind.S): _y_to_s,
    (ParamKind.S, ParamKind.ABCD): _s_to_abcd,
    (ParamKind.ABCD, ParamKind.S): _abcd_to_s,
    (ParamKind.S, ParamKind.H): _s_to_h,
    (ParamKind.H, ParamKind.S): _h_to_s,
    (ParamKind.Z, ParamKind.Y): _invert,
    (ParamKind.Y, ParamKind.Z): _invert,
    (ParamKind.Z, ParamKind.ABCD): _z_abcd,
    (ParamKind.ABCD, ParamKind.Z): _z_abcd,
    (ParamKind.Y, ParamKind.ABCD): _y_to_abcd,
    (ParamKind.ABCD, ParamKind.Y): _abcd_to_y,
    (ParamKind.Z, ParamKind.H): _z_h,
    (ParamKind.H, ParamKind.Z): _z_h,
    (ParamKind.Y, ParamKind.H): _y_h,
    (ParamKind.H, ParamKind.Y): _y_h,
    (ParamKind.ABCD, ParamKind.H): _abcd_to_h,
    (ParamKind.H, ParamKind.ABCD): _h_to_abcd,
}


def _reference_impedance(modes: ModeSpec) -> float:
    z = modes.side1[0]
    for other in modes.side1 + modes.side2:
        if other != z:
            raise ReferenceInapplicable("scalar tables need one shared reference impedance")
    if z.imag != 0.0 or z.real <= 0.0:
        raise ReferenceInapplicable(f"scalar tables need a real positive impedance, got {z}")
    return z.real


def monomode_convert(net: NetworkMatrix, target: ParamKind) -> NetworkMatrix:
    """Closed-form scalar two-port conversion at equal real reference impedance.

    Covers every ordered pair among S, Z, Y, ABCD, H plus S<->T; the
    remaining T pairings have no standard scalar closed form and raise
    :class:`ReferenceInapplicable`, as do inputs outside the tables'
    assumptions (M > 1, unequal or complex impedances) and degenerate
    inputs whose target representation does not exist (zero denominator).
    """
    if net.n_modes != 1:
        raise ReferenceInapplicable(f"scalar tables cover M=1 only, got M={net.n_modes}")
    z0 = _reference_impedance(net.modes)
    if target == net.kind:
        return net
    rule = _SCALAR_RULES.get((net.kind, target))
    if rule is None:
        raise ReferenceInapplicable(f"no scalar closed form for {net.kind} -> {target}")
    m = net.matrix.data
    a, b, c, d = complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1])
    nums, den = rule(a, b, c, d, a * d - b * c, z0, 1.0 / z0)
    if den == 0:
        raise ReferenceInapplicable(
            f"{target} representation does not exist (zero denominator in {net.kind} -> {target})"
        )
    data = np.array([[nums[0], nums[1]], [nums[2], nums[3]]], dtype=np.complex128) / den
    if not np.all(np.isfinite(data.view(np.float64))):
        raise ReferenceInapplicable(f"{net.kind} -> {target} overflowed the scalar tables")
    return NetworkMatrix(target, BlockMatrix(data), net.modes, net.frequency)


def _condition(matrix: np.ndarray) -> float:
    s = np.linalg.svd(matrix, compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] > 0.0 else float("inf")


def redheffer_star(a: NetworkMatrix, b: NetworkMatrix) -> NetworkMatrix:
    """Scattering matrix of two cascaded networks via the star product.

    Joins side 2 of ``a`` to side 1 of ``b``; junction mode counts and
    impedances must match (same rule as :func:`mmnet.cascade.cascade`).
    Implemented directly from the block formulas, independent of the
    conversion engine.
    """
    if a.kind != ParamKind.S or b.kind != ParamKind.S:
        raise ValueError("star product is defined for S parameters")
    left = a.modes.side2
    right = b.modes.side1
    if len(left) != len(right):
        raise InterfaceMismatch(
            f"junction mode counts differ: {len(left)} vs {len(right)}"
        )
    for m, (za, zb) in enumerate(zip(left, right), start=1):
        if abs(za - zb) > 1e-12 * max(abs(za), abs(zb)):
            raise InterfaceMismatch(f"junction impedance mismatch at mode {m}: {za} vs {zb}")
    fa, fb = a.frequency, b.frequency
    if fa is not None and fb is not None and fa != fb:
        raise InterfaceMismatch(f"frequency mismatch at junction: {fa} Hz vs {fb} Hz")

    a11, a12, a21, a22 = (a.matrix.block(i, j) for i in (1, 2) for j in (1, 2))
    b11, b12, b21, b22 = (b.matrix.block(i, j) for i in (1, 2) for j in (1, 2))
    eye = np.eye(a.n_modes, dtype=np.complex128)
    j_ab = eye - b11 @ a22
    j_ba = eye - a22 @ b11
    condition = max(_condition(j_ab), _condition(j_ba))
    if not np.isfinite(condition) or condition > _JUNCTION_CONDITION_LIMIT:
        raise SingularJunction(
            f"junction operator singular (condition {condition:.3e}); "
            "the cascaded scattering matrix does not exist"
        )
    s11 = a11 + a12 @ np.linalg.solve(j_ab, b11 @ a21)
    s12 = a12 @ np.linalg.solve(j_ab, b12)
    s21 = b21 @ np.linalg.solve(j_ba, a21)
    s22 = b22 + b21 @ np.linalg.solve(j_ba, a22 @ b12)
    frequency = a.frequency if a.frequency is not None else b.frequency
    return NetworkMatrix(
        ParamKind.S,
        BlockMatrix.from_blocks(s11, s12, s21, s22),
        ModeSpec(a.modes.side1, b.modes.side2),
        frequency,
    )


def _draw_impedances(rng: np.random.Generator, count: int) -> tuple[complex, ...]:
    magnitude = rng.uniform(10.0, 200.0, count)
    phase = rng.uniform(-np.pi / 3, np.pi / 3, count)
    return tuple(magnitude * np.exp(1j * phase))


def random_network(
    kind: ParamKind,
    n_modes: int,
    seed: int,
    condition_cap: float = 1e6,
) -> NetworkMatrix:
    """Seed-reproducible random network with well-conditioned conversions.

    Matrix entries are uniform in [-1, 1] for real and imaginary parts; mode
    impedances have uniform magnitude in [10, 200] ohms and phase in
    [-pi/3, pi/3]. Draws are rejected until the lower half of the network's
    basis has condition <= ``condition_cap`` in every other family's
    coordinates, which bounds direct and round-trip conversions alike.
    """
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    if condition_cap < 1.0:
        raise ValueError(f"condition_cap must be >= 1, got {condition_cap}")
    rng = np.random.default_rng(seed)
    side = 2 * n_modes
    for _ in range(_REJECTION_BUDGET):
        data = rng.uniform(-1.0, 1.0, (side, side)) + 1j * rng.uniform(-1.0, 1.0, (side, side))
        modes = ModeSpec(_draw_impedances(rng, n_modes), _draw_impedances(rng, n_modes))
        net = NetworkMatrix(kind, BlockMatrix(data), modes)
        basis = seed_basis(kind, net)
        worst = 1.0
        for target in ParamKind:
            if target == kind:
                continue
            lower = express_in(basis, target, modes).lower()
            worst = max(worst, _condition(lower))
            if worst > condition_cap:
                break
        if worst <= condition_cap:
            return net
    raise GenerationFailed(
        f"no draw met condition_cap={condition_cap:g} within {_REJECTION_BUDGET} attempts"
    )


def sample_states(net: NetworkMatrix, count: int, seed: int) -> np.ndarray:
    """Canonical states lying exactly in the network's solution space.

    The free (lower-stack) coordinates are drawn uniformly in [-1, 1] per
    real/imaginary part, the upper stack is completed through the network's
    matrix, and the result is mapped to canonical coordinates. Returns an
    array of shape (count, 4M); rows feed straight into
    :func:`mmnet.convert.defining_relation_residual`.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    n2 = 2 * net.n_modes
    lower = rng.uniform(-1.0, 1.0, (count, n2)) + 1j * rng.uniform(-1.0, 1.0, (count, n2))
    upper = lower @ net.matrix.data.T
    stacked = np.hstack([upper, lower])
    to_c = coord_system(net.kind, net.modes).to_canonical
    return stacked @ to_c.T
