"""Cash-flow matrices and the probability objects derived from them.

Indexing follows the source/destination convention: ``entries[j, k]`` is the
flow from agent ``j`` (row) to agent ``k`` (column); the diagonal holds
savings.
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateAgent,
    InvalidFlowMatrix,
    NegativeFlow,
    ZeroInteragentFlow,
    ZeroTotalFlow,
)


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FlowMatrix:
    agents: tuple
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise DimensionMismatch(f"flow matrix must be square and non-empty, got shape {entries.shape}")
        agents = tuple(str(a) for a in self.agents)
        if len(agents) != entries.shape[0]:
            raise DimensionMismatch(f"{len(agents)} agents for a {entries.shape[0]}x{entries.shape[0]} matrix")
        if any(a == "" for a in agents):
            raise InvalidFlowMatrix("empty agent identifier")
        if len(set(agents)) != len(agents):
            dup = next(a for a in agents if agents.count(a) > 1)
            raise DuplicateAgent(f"duplicate agent {dup!r}")
        if not np.all(np.isfinite(entries)):
            raise InvalidFlowMatrix("non-finite flow entry")
        if np.any(entries < 0.0):
            j, k = np.argwhere(entries < 0.0)[0]
            raise NegativeFlow(f"negative flow {entries[j, k]!r} from {agents[j]!r} to {agents[k]!r}")
        if not entries.sum() > 0.0:
            raise ZeroTotalFlow("total flow is zero")
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "entries", _frozen(entries))

    @classmethod
    def from_array(cls, entries, agents: Optional[Sequence[str]] = None) -> "FlowMatrix":
        entries = np.asarray(entries, dtype=np.float64)
        if agents is None:
            agents = [str(i + 1) for i in range(entries.shape[0] if entries.ndim else 0)]
        return cls(tuple(agents), entries)

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def total(self) -> float:
        return float(self.entries.sum())

    def off_diagonal(self) -> np.ndarray:
        c = np.array(self.entries)
        np.fill_diagonal(c, 0.0)
        return c

    def scaled(self, factor: float) -> "FlowMatrix":
        return FlowMatrix(self.agents, self.entries * factor)

    def __eq__(self, other):
        if not isinstance(other, FlowMatrix):
            return NotImplemented
        return self.agents == other.agents and np.array_equal(self.entries, other.entries)

    def __repr__(self):
        return f"FlowMatrix(agents={self.agents!r}, entries={self.entries.tolist()!r})"


@dataclass(frozen=True, eq=False)
class ProbabilityMatrix:
    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class FlowMarginals:
    out_flows: np.ndarray
    in_flows: np.ndarray
    out_probs: np.ndarray
    in_probs: np.ndarray


@dataclass(frozen=True, eq=False)
class ConditionalFlows:
    """Row (destination) and column (source) conditionals.

    ``rows[j]`` is p^(j)_k over destinations, ``cols[:, k]`` is p^j_(k) over
    sources. Rows/columns of agents with no out-flow/in-flow are all zero and
    flagged False in ``row_defined`` / ``col_defined``.
    """

    rows: np.ndarray
    cols: np.ndarray
    row_defined: np.ndarray
    col_defined: np.ndarray

    def row(self, j: int):
        return self.rows[j] if self.row_defined[j] else None

    def col(self, k: int):
        return self.cols[:, k] if self.col_defined[k] else None


@dataclass(frozen=True)
class SavingsSplit:
    p_s: float
    p_c: float


def to_probability_matrix(m: FlowMatrix) -> ProbabilityMatrix:
    total = m.total
    if not total > 0.0:
        raise ZeroTotalFlow("total flow is zero")
    return ProbabilityMatrix(_frozen(m.entries / total))


def savings_split(m: FlowMatrix) -> SavingsSplit:
    total = m.total
    if not total > 0.0:
        raise ZeroTotalFlow("total flow is zero")
    p_s = float(np.trace(m.entries) / total)
    return SavingsSplit(p_s, 1.0 - p_s)


def marginals(m: FlowMatrix) -> FlowMarginals:
    c = m.off_diagonal()
    out_flows = c.sum(axis=1)
    in_flows = c.sum(axis=0)
    total = c.sum()
    if not total > 0.0:
        raise ZeroInteragentFlow("no inter-agent flow; marginal probabilities undefined")
    return FlowMarginals(_frozen(out_flows), _frozen(in_flows), _frozen(out_flows / total), _frozen(in_flows / total))


def conditionals(m: FlowMatrix) -> ConditionalFlows:
    c = m.off_diagonal()
    out_flows = c.sum(axis=1)
    in_flows = c.sum(axis=0)
    row_defined = out_flows > 0.0
    col_defined = in_flows > 0.0
    rows = c / np.where(row_defined, out_flows, 1.0)[:, None]
    cols = c / np.where(col_defined, in_flows, 1.0)[None, :]
    return ConditionalFlows(_frozen(rows), _frozen(cols), row_defined, col_defined)
