"""Weak values for single and sequential measurements, and their bounds.

The central quantity is Tr(E A_n ... A_1 rho) / Tr(E rho): the ordered
product of the measured observables sandwiched between preparation rho
and post-selection effect E. Passing E = identity (``post=None``)
describes runs where no data is discarded; the magnitude of the value is
then bounded by the product of the spectral norms, and for a pair of 0/1
projectors its real part can reach, but never beat, -1/8.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import qm
from .errors import DimensionMismatch, EmptyList, NotAProjector, ZeroPostSelectionProbability

ZERO_PROBABILITY_TOL = 1e-14
IDEMPOTENCE_TOL = 1e-10
PROJECTOR_PAIR_FLOOR = -0.125


class WeakValueKind(enum.Enum):
    PURE_POST_SELECTED = "pure-post-selected"
    GENERALIZED_POVM = "generalized-povm"
    NO_POST_SELECTION = "no-post-selection"


@dataclass(frozen=True)
class WeakValue:
    """A weak value with the definition used and the post-selection odds."""

    value: complex
    definition: WeakValueKind
    postselection_probability: float

    def __post_init__(self):
        if self.definition is WeakValueKind.NO_POST_SELECTION and self.postselection_probability != 1.0:
            raise ValueError("no post-selection implies success probability exactly 1")


@dataclass(frozen=True)
class MeasurementSequence:
    """Ordered observables measured first-to-last, all of one dimension."""

    observables: tuple[qm.Observable, ...]

    def __init__(self, observables):
        observables = tuple(observables)
        if not observables:
            raise EmptyList("a measurement sequence needs at least one observable")
        dims = {obs.dim for obs in observables}
        if len(dims) != 1:
            raise DimensionMismatch(f"sequence mixes dimensions {sorted(dims)}")
        object.__setattr__(self, "observables", observables)

    @property
    def dim(self) -> int:
        return self.observables[0].dim

    def __len__(self) -> int:
        return len(self.observables)

    def ordered_product(self) -> np.ndarray:
        """A_n ... A_1 (first measured observable rightmost)."""
        product = self.observables[0].matrix
        for obs in self.observables[1:]:
            product = obs.matrix @ product
        return product


def seq_weak_value(
    rho: qm.MixedState,
    post: qm.PovmElement | None,
    seq: MeasurementSequence,
) -> WeakValue:
    """Sequential weak value Tr(E A_n ... A_1 rho) / Tr(E rho).

    ``post=None`` means E = identity: the denominator is 1 and nothing is
    discarded. Raises ZeroPostSelectionProbability when Tr(E rho) is below
    threshold; the value is undefined there, not merely large.
    """
    if rho.dim != seq.dim:
        raise DimensionMismatch(f"state dimension {rho.dim} != sequence dimension {seq.dim}")
    product = seq.ordered_product()
    if post is None:
        value = complex(np.trace(product @ rho.matrix))
        return WeakValue(value, WeakValueKind.NO_POST_SELECTION, 1.0)
    if post.dim != rho.dim:
        raise DimensionMismatch(f"post-selection dimension {post.dim} != state dimension {rho.dim}")
    # Tr(E rho) is real for Hermitian E, rho; drop the float residue.
    probability = float(np.trace(post.matrix @ rho.matrix).real)
    if probability <= ZERO_PROBABILITY_TOL:
        raise ZeroPostSelectionProbability(
            f"Tr(E rho) = {probability:.3e} is below {ZERO_PROBABILITY_TOL:g}"
        )
    value = complex(np.trace(post.matrix @ product @ rho.matrix)) / probability
    return WeakValue(value, WeakValueKind.GENERALIZED_POVM, probability)


def pure_weak_value(
    psi: qm.PureState,
    phi: qm.PureState | None,
    seq: MeasurementSequence,
) -> WeakValue:
    """Pure-state convenience wrapper: <phi|A_n...A_1|psi> / <phi|psi>."""
    rho = psi.to_density()
    if phi is None:
        return seq_weak_value(rho, None, seq)
    wv = seq_weak_value(rho, qm.PovmElement(np.outer(phi.amplitudes, phi.amplitudes.conj())), seq)
    return WeakValue(wv.value, WeakValueKind.PURE_POST_SELECTED, wv.postselection_probability)


def norm_product_bound(seq: MeasurementSequence) -> float:
    """Product of spectral norms: the magnitude cap on the no-post-selection
    sequential weak value."""
    bound = 1.0
    for obs in seq.observables:
        bound *= qm.spectral_norm(obs)
    return bound


def _check_projector(obs: qm.Observable, name: str) -> None:
    defect = np.linalg.norm(obs.matrix @ obs.matrix - obs.matrix, ord=2)
    if defect > IDEMPOTENCE_TOL:
        raise NotAProjector(f"{name} is not idempotent (defect {defect:.3e})")


@dataclass(frozen=True)
class ProjectorPairReport:
    re_value: float
    bound_satisfied: bool


def projector_pair_report(
    psi: qm.PureState,
    first: qm.Observable,
    second: qm.Observable,
) -> ProjectorPairReport:
    """Re <psi| second * first |psi> for two projectors, checked against the
    -1/8 floor."""
    _check_projector(first, "first observable")
    _check_projector(second, "second observable")
    wv = seq_weak_value(psi.to_density(), None, MeasurementSequence([first, second]))
    re_value = wv.value.real
    return ProjectorPairReport(re_value, re_value >= PROJECTOR_PAIR_FLOOR - 1e-12)
