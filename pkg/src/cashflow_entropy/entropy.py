"""Shannon entropy in bits, its un-normalized form, and the grouping identity."""
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import AllZeroWeights, InconsistentGroupSums, InvalidDistribution

NORMALIZATION_TOL = 1e-12


def _as_vector(values) -> np.ndarray:
    x = np.ascontiguousarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidDistribution(f"expected a 1-D vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidDistribution("non-finite element")
    if np.any(x < 0.0):
        raise InvalidDistribution("negative element")
    return x


def entropy(p) -> float:
    """Shannon entropy of a probability vector, in bits (0 log 0 = 0).

    Raises InvalidDistribution unless every element is non-negative and the
    elements sum to 1 within 1e-12.
    """
    x = _as_vector(p)
    if x.size == 0 or abs(x.sum() - 1.0) > NORMALIZATION_TOL:
        raise InvalidDistribution(f"probabilities sum to {x.sum()!r}, not 1")
    return float(_kernels.weight_entropy(x))


def entropy_unnormalized(x) -> float:
    """K(x): entropy of the weights after dividing by their sum."""
    w = _as_vector(x)
    if w.size == 0 or not w.sum() > 0.0:
        raise AllZeroWeights("weights sum to zero")
    return float(_kernels.weight_entropy(w))


K = entropy_unnormalized


@dataclass(frozen=True)
class GroupedDistribution:
    """Weights of outcomes arranged into groups.

    ``group_weights[g]`` must equal ``sum(member_weights[g])`` to 1e-12
    relative tolerance.
    """

    group_weights: tuple
    member_weights: tuple

    def __post_init__(self):
        gw = _as_vector(self.group_weights)
        members = tuple(_as_vector(m) for m in self.member_weights)
        if len(members) != gw.size:
            raise InconsistentGroupSums(f"{gw.size} group weights for {len(members)} groups")
        for g, (w, m) in enumerate(zip(gw, members)):
            s = m.sum()
            if abs(w - s) > NORMALIZATION_TOL * max(abs(w), abs(s)):
                raise InconsistentGroupSums(f"group {g}: weight {w!r} but members sum to {s!r}")
        object.__setattr__(self, "group_weights", gw)
        object.__setattr__(self, "member_weights", members)

    @classmethod
    def from_members(cls, members: Sequence) -> "GroupedDistribution":
        members = tuple(_as_vector(m) for m in members)
        return cls(tuple(float(m.sum()) for m in members), members)

    def pooled(self) -> np.ndarray:
        return np.concatenate(self.member_weights) if self.member_weights else np.zeros(0)


class GroupedEntropy(NamedTuple):
    group_entropy: float
    internal_entropies: tuple
    total: float


def grouped_entropy_decomposition(g: GroupedDistribution) -> GroupedEntropy:
    """Split entropy into between-group and weighted within-group parts.

    total = H(group probabilities) + sum_j p_j * H_j. A zero-weight group
    has internal entropy 0 and contributes nothing.
    """
    if not g.group_weights.sum() > 0.0:
        raise AllZeroWeights("total weight is zero")
    p = g.group_weights / g.group_weights.sum()
    between = float(_kernels.weight_entropy(g.group_weights))
    internal = tuple(
        float(_kernels.weight_entropy(m)) if m.sum() > 0.0 else 0.0 for m in g.member_weights
    )
    total = between + float(np.dot(p, internal))
    return GroupedEntropy(between, internal, total)
