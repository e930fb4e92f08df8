"""Composition of two networks sharing an interface.

Side 2 of the first network is joined to side 1 of the second. Both are
converted to a chain-type family (T or ABCD), multiplied in order, and the
product converted to the requested output family. Chain matrices relate
side-1 quantities to side-2 quantities, so the junction identification is
exactly matrix multiplication ``first @ second``.
"""
from __future__ import annotations

import numpy as np

from .network import BlockMatrix, ModeSpec, NetworkMatrix, ParamKind
from .convert import convert

__all__ = ["InterfaceMismatch", "cascade"]

_IMPEDANCE_MATCH_TOL = 1e-12


class InterfaceMismatch(ValueError):
    """The two networks cannot share a junction (mode counts, impedances or frequency)."""


def _check_junction(first: NetworkMatrix, second: NetworkMatrix) -> None:
    left = first.modes.side2
    right = second.modes.side1
    if len(left) != len(right):
        raise InterfaceMismatch(
            f"junction mode counts differ: {len(left)} (first, side 2) vs "
            f"{len(right)} (second, side 1)"
        )
    for m, (za, zb) in enumerate(zip(left, right), start=1):
        if abs(za - zb) > _IMPEDANCE_MATCH_TOL * max(abs(za), abs(zb)):
            raise InterfaceMismatch(
                f"junction impedance mismatch at mode {m}: {za} vs {zb}"
            )
    fa, fb = first.frequency, second.frequency
    if fa is not None and fb is not None and fa != fb:
        raise InterfaceMismatch(f"frequency mismatch at junction: {fa} Hz vs {fb} Hz")


def cascade(
    first: NetworkMatrix,
    second: NetworkMatrix,
    via: ParamKind = ParamKind.T,
    output_kind: ParamKind | None = None,
) -> NetworkMatrix:
    """Compose two networks whose junction modes match exactly.

    ``via`` selects the chain family used for the multiplication (T or ABCD);
    the two routes agree for well-conditioned inputs. ``output_kind`` defaults
    to the first network's kind. Mode impedances at the junction must be equal
    (within 1e-12 relative); no renormalization is attempted, as the wave
    definitions depend on them.

    Raises :class:`InterfaceMismatch` on a bad junction and propagates
    :class:`~mmnet.convert.SingularLowerHalf` from the conversions.
    """
    if via not in (ParamKind.T, ParamKind.ABCD):
        raise ValueError(f"via must be T or ABCD, got {via}")
    _check_junction(first, second)
    out_kind = output_kind if output_kind is not None else first.kind
    chain_first, _ = convert(first, via)
    chain_second, _ = convert(second, via)
    product = chain_first.matrix.data @ chain_second.matrix.data
    frequency = first.frequency if first.frequency is not None else second.frequency
    joined = NetworkMatrix(
        via,
        BlockMatrix(product),
        ModeSpec(first.modes.side1, second.modes.side2),
        frequency,
    )
    result, _ = convert(joined, out_kind)
    return result
