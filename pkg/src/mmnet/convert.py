"""Conversion between network-parameter families by change of basis.

Converting a kind-A matrix into kind B takes three steps: seed the basis of
the network's solution space in A-coordinates, rewrite it in B-coordinates,
and right-divide the upper half by the lower half. The lower half is
invertible exactly when the B representation of the network exists; when it
is singular (or numerically indistinguishable from singular) the conversion
raises :class:`SingularLowerHalf` instead of returning garbage.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import BlockMatrix, NetworkMatrix, ParamKind
from .statespace import Basis, coord_system, express_in, seed_basis

__all__ = [
    "ConversionReport",
    "SingularLowerHalf",
    "convert",
    "convert_direct",
    "defining_relation_residual",
]

# Double-precision heuristic: beyond this the lower half carries no trustworthy inverse.
CONDITION_LIMIT = 1e12

_RESIDUAL_FLOOR = 1e-30

# Pairs whose lower half is block-triangular, so singularity pins one source block.
_SINGULAR_HINTS = {
    (ParamKind.S, ParamKind.T): "transmission block S21 is not invertible",
    (ParamKind.T, ParamKind.S): "block T11 is not invertible",
    (ParamKind.Z, ParamKind.ABCD): "transfer block Z21 is not invertible",
    (ParamKind.Y, ParamKind.ABCD): "transfer block Y21 is not invertible",
    (ParamKind.ABCD, ParamKind.Z): "block C is not invertible",
    (ParamKind.ABCD, ParamKind.Y): "block B is not invertible",
    (ParamKind.Z, ParamKind.Y): "Z is not invertible",
    (ParamKind.Y, ParamKind.Z): "Y is not invertible",
}


@dataclass(frozen=True)
class ConversionReport:
    """Diagnostics of one conversion: where it went and how invertible it was."""

    source_kind: ParamKind
    target_kind: ParamKind
    lower_half_condition: float
    succeeded: bool


class SingularLowerHalf(ValueError):
    """The target representation does not exist for this network.

    Carries the failed :class:`ConversionReport` as ``report``.
    """

    def __init__(self, message: str, report: ConversionReport):
        super().__init__(message)
        self.report = report


def _spectral_condition(matrix: np.ndarray) -> float:
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def convert(net: NetworkMatrix, target: ParamKind) -> tuple[NetworkMatrix, ConversionReport]:
    """Convert a network matrix into another parameter family.

    Every ordered pair of distinct kinds is a single direct step; no
    intermediate representations are involved. Converting to the network's
    own kind returns the input unchanged.

    Returns the converted :class:`NetworkMatrix` (same modes and frequency)
    together with a :class:`ConversionReport`.

    Raises
    ------
    SingularLowerHalf
        If the lower half of the re-expressed basis has condition number
        above ``CONDITION_LIMIT`` (the target representation does not exist,
        e.g. the T-matrix of a network with singular S21, or the Z-matrix of
        a pure series element).
    """
    if target == net.kind:
        return net, ConversionReport(net.kind, target, 1.0, True)
    basis = express_in(seed_basis(net.kind, net), target, net.modes)
    n2 = 2 * net.n_modes
    upper = basis.columns[:n2]
    lower = basis.columns[n2:]
    condition = _spectral_condition(lower)
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        report = ConversionReport(net.kind, target, condition, False)
        hint = _SINGULAR_HINTS.get((net.kind, target))
        detail = f": {hint}" if hint else ""
        raise SingularLowerHalf(
            f"no {target} representation of this {net.kind} network "
            f"(lower-half condition {condition:.3e} exceeds {CONDITION_LIMIT:.0e}){detail}",
            report,
        )
    # upper @ inv(lower), via LAPACK gesv (LU with partial pivoting).
    data = np.linalg.solve(lower.T, upper.T).T
    result = NetworkMatrix(target, BlockMatrix(data), net.modes, net.frequency)
    return result, ConversionReport(net.kind, target, condition, True)


def convert_direct(net: NetworkMatrix, target: ParamKind) -> NetworkMatrix:
    """Single-step conversion; always identical to :func:`convert`'s result.

    Exists to make the no-intermediate-hops guarantee testable as a contract:
    the output is bit-for-bit the matrix :func:`convert` returns.
    """
    result, _ = convert(net, target)
    return result


def defining_relation_residual(net: NetworkMatrix, states) -> float:
    """Worst relative defining-relation residual of the states against ``net``.

    ``states`` is one canonical state vector of length 4M or a sequence of
    them. Each state is rewritten in the network's own coordinates, split
    into upper/lower stacks, and scored as

        ||upper - N @ lower|| / (||upper|| + ||N @ lower|| + eps)

    States lying in the network's solution space score at round-off level.
    """
    arr = np.asarray(states, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    n4 = 4 * net.n_modes
    if arr.ndim != 2 or arr.shape[1] != n4:
        raise ValueError(f"states must have {n4} canonical components, got shape {arr.shape}")
    from_c = coord_system(net.kind, net.modes).from_canonical
    stacked = arr @ from_c.T
    n2 = 2 * net.n_modes
    upper = stacked[:, :n2]
    predicted = stacked[:, n2:] @ net.matrix.data.T
    num = np.linalg.norm(upper - predicted, axis=1)
    den = np.linalg.norm(upper, axis=1) + np.linalg.norm(predicted, axis=1) + _RESIDUAL_FLOOR
    return float(np.max(num / den))
