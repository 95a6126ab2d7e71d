"""Closed-form Gaussian pointer mathematics.

A measurement pointer is a Gaussian wavepacket of width ``sigma``; the
measurement coupling displaces its center by the measured eigenvalue
(units fixed so the coupling constant times interaction time is 1, and
hbar = 1). Everything downstream needs only matrix elements of 1, x, x^2,
p, p^2 between two displaced copies of the packet, and those have exact
closed forms: with ov = exp(-(a_k - a_l)^2 / (8 sigma^2)),

    <phi(a_l)| 1   |phi(a_k)> = ov
    <phi(a_l)| x   |phi(a_k)> = ((a_k + a_l)/2) ov
    <phi(a_l)| x^2 |phi(a_k)> = (sigma^2 + ((a_k + a_l)/2)^2) ov
    <phi(a_l)| p   |phi(a_k)> = (1/(2 sigma^2)) ((a_k - a_l)/(2i)) ov
    <phi(a_l)| p^2 |phi(a_k)> = (1/(4 sigma^4)) (sigma^2 - ((a_k - a_l)/2)^2) ov

All functions here are pure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError


class PointerOperatorKind(enum.Enum):
    """Which pointer operator a joint moment reads out on one slot."""

    IDENTITY = "i"
    POSITION = "x"
    POSITION_SQUARED = "X"
    MOMENTUM = "p"
    MOMENTUM_SQUARED = "P"


@dataclass(frozen=True)
class GaussianPointer:
    """Gaussian pointer fully described by its width ``sigma`` > 0."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise InputError(f"pointer width must be positive, got {self.sigma!r}")


def wavefunction(ptr: GaussianPointer, center: float, x: float) -> complex:
    """Position-space amplitude of the packet displaced to ``center``."""
    s2 = ptr.sigma**2
    return complex((2.0 * math.pi * s2) ** -0.25 * math.exp(-((x - center) ** 2) / (4.0 * s2)))


def matrix_element(
    ptr: GaussianPointer,
    kind: PointerOperatorKind,
    left_center: float,
    right_center: float,
) -> complex:
    """Exact <phi(left)| O |phi(right)> for displaced copies of the packet.

    Swapping the centers conjugates the result (Hermiticity).
    """
    s2 = ptr.sigma**2
    mean = 0.5 * (left_center + right_center)
    # "right minus left" so that a momentum element between |phi(a_k)> on
    # the right and <phi(a_l)| on the left carries (a_k - a_l)/(2i).
    gap = right_center - left_center
    ov = math.exp(-(gap**2) / (8.0 * s2))
    if kind is PointerOperatorKind.IDENTITY:
        return complex(ov)
    if kind is PointerOperatorKind.POSITION:
        return complex(mean * ov)
    if kind is PointerOperatorKind.POSITION_SQUARED:
        return complex((s2 + mean**2) * ov)
    if kind is PointerOperatorKind.MOMENTUM:
        return -1j * gap / (4.0 * s2) * ov
    if kind is PointerOperatorKind.MOMENTUM_SQUARED:
        return complex((s2 - (gap / 2.0) ** 2) / (4.0 * s2**2) * ov)
    raise InputError(f"unknown pointer operator kind {kind!r}")


def displaced_norm(ptr: GaussianPointer, shift: complex) -> float:
    """Norm of the packet displaced by a possibly complex ``shift``.

    Real shifts preserve normalization; an imaginary component inflates
    the norm to exp(Im(shift)^2 / (4 sigma^2)).
    """
    return math.exp(np.imag(shift) ** 2 / (4.0 * ptr.sigma**2))


def linearization_error(ptr: GaussianPointer, eigenvalue: float) -> float:
    """Squared norm of the defect between the exact displacement and its
    first-order (1 - i a p) truncation.

    Scales as (3/64) (a/sigma)^4 for small a/sigma, which is what makes
    large widths "weak".
    """
    ratio2 = eigenvalue**2 / ptr.sigma**2
    decay = math.exp(-ratio2 / 8.0)
    return 2.0 * (1.0 - decay) + 0.25 * ratio2 * (1.0 - 2.0 * decay)


def weak_regime_check(
    ptr: GaussianPointer,
    eigenvalues,
    wv_magnitude: float,
    ratio: float = 10.0,
) -> bool:
    """True iff sigma exceeds ``ratio`` times both the largest eigenvalue
    magnitude and the weak-value magnitude (boundary inclusive).

    The threshold is a convention, not a sharp boundary; callers may tune
    ``ratio``.
    """
    if not ratio > 0:
        raise InputError(f"ratio must be positive, got {ratio!r}")
    scale = max((abs(float(a)) for a in eigenvalues), default=0.0)
    return ptr.sigma >= ratio * scale and ptr.sigma >= ratio * abs(wv_magnitude)
