"""Hierarchical entropy decomposition of a cash-flow matrix.

Undefined quantities (for example the savings entropy of an economy with no
savings) are ``None``, never 0.0.
"""
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import InvalidPartition, UndefinedMarginal, ZeroInteragentFlow
from .flows import FlowMatrix, savings_split

LN2 = math.log(2.0)


@dataclass(frozen=True)
class EntropyReport:
    total_H: float
    H_sc: float
    H_s: Optional[float]
    H_c: Optional[float]
    p_s: float
    p_c: float
    H_out_agg: Optional[float]
    H_in_agg: Optional[float]
    savings_identity_residual: float
    sum_identity_residual: Optional[float]
    diff_identity_residual: Optional[float]


@dataclass(frozen=True, eq=False)
class AgentEntropyProfile:
    """Per-agent marginals and conditional entropies (bits).

    Arrays are indexed like ``agents``. ``H_out_agg``/``H_in_agg`` are the
    entropies of ``out_prob``/``in_prob``, carried so that the general
    differential balance can be evaluated from the profile alone.
    """

    agents: tuple
    out_prob: np.ndarray
    in_prob: np.ndarray
    out_entropy: np.ndarray
    in_entropy: np.ndarray
    H_out_agg: float
    H_in_agg: float

    @property
    def differential(self) -> np.ndarray:
        return self.in_entropy - self.out_entropy


def _binary_entropy(p: float) -> float:
    h = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            h -= q * math.log2(q)
    return h


def _profile(m: FlowMatrix) -> AgentEntropyProfile:
    c = np.ascontiguousarray(m.off_diagonal())
    out_flows = c.sum(axis=1)
    in_flows = c.sum(axis=0)
    total = out_flows.sum()
    if not total > 0.0:
        raise ZeroInteragentFlow("no inter-agent flow")
    return AgentEntropyProfile(
        agents=m.agents,
        out_prob=out_flows / total,
        in_prob=in_flows / total,
        out_entropy=np.asarray(_kernels.row_entropies(c)),
        in_entropy=np.asarray(_kernels.row_entropies(np.ascontiguousarray(c.T))),
        H_out_agg=float(_kernels.weight_entropy(out_flows)),
        H_in_agg=float(_kernels.weight_entropy(in_flows)),
    )


def _sum_residual(H_c, prof: AgentEntropyProfile) -> float:
    weighted = np.dot(prof.in_prob, prof.in_entropy) + np.dot(prof.out_prob, prof.out_entropy)
    return float(H_c - (0.5 * (prof.H_out_agg + prof.H_in_agg) + 0.5 * weighted))


def _diff_residual(prof: AgentEntropyProfile) -> float:
    return float(
        (prof.H_in_agg - prof.H_out_agg)
        + (np.dot(prof.in_prob, prof.in_entropy) - np.dot(prof.out_prob, prof.out_entropy))
    )


def full_report(m: FlowMatrix):
    """Compute the complete decomposition for one economy.

    Returns ``(EntropyReport, AgentEntropyProfile)``. For an economy with no
    inter-agent flow the profile is ``None`` and every inter-agent field of
    the report is ``None``.
    """
    entries = np.ascontiguousarray(m.entries)
    total_H = float(_kernels.weight_entropy(entries.ravel()))
    split = savings_split(m)
    diag = np.ascontiguousarray(np.diag(entries))
    H_s = float(_kernels.weight_entropy(diag)) if split.p_s > 0.0 else None
    H_sc = _binary_entropy(split.p_s)

    off = m.off_diagonal()
    if off.sum() > 0.0:
        H_c = float(_kernels.weight_entropy(off.ravel()))
        prof = _profile(m)
        sum_res = _sum_residual(H_c, prof)
        diff_res = _diff_residual(prof)
        H_out, H_in = prof.H_out_agg, prof.H_in_agg
    else:
        H_c = prof = sum_res = diff_res = H_out = H_in = None

    reassembled = H_sc
    if H_s is not None:
        reassembled += split.p_s * H_s
    if H_c is not None:
        reassembled += split.p_c * H_c
    report = EntropyReport(
        total_H=total_H,
        H_sc=H_sc,
        H_s=H_s,
        H_c=H_c,
        p_s=split.p_s,
        p_c=split.p_c,
        H_out_agg=H_out,
        H_in_agg=H_in,
        savings_identity_residual=total_H - reassembled,
        sum_identity_residual=sum_res,
        diff_identity_residual=diff_res,
    )
    return report, prof


def differential_balance(profile: AgentEntropyProfile, stationary: bool) -> float:
    """Flow-weighted balance of inflow minus outflow entropies.

    With ``stationary=True`` this is sum_j p^j (H_j - H^j), which vanishes
    when in- and out-marginals coincide. Otherwise the general form
    (H'' - H') + sum_j (p_j H_j - p^j H^j) is returned.
    """
    if stationary:
        return float(np.dot(profile.out_prob, profile.differential))
    return _diff_residual(profile)


def identity_residuals(m: FlowMatrix):
    """(sum identity residual, difference identity residual) for ``m``."""
    off = m.off_diagonal()
    if not off.sum() > 0.0:
        raise ZeroInteragentFlow("no inter-agent flow")
    H_c = float(_kernels.weight_entropy(np.ascontiguousarray(off.ravel())))
    prof = _profile(m)
    return _sum_residual(H_c, prof), _diff_residual(prof)


# --- group trees ----------------------------------------------------------

@dataclass(frozen=True)
class GroupNode:
    label: str
    children: tuple = ()

    def agents(self) -> Iterator[str]:
        for child in self.children:
            if isinstance(child, GroupNode):
                yield from child.agents()
            else:
                yield child


Child = Union[GroupNode, str]


@dataclass(frozen=True)
class GroupTree:
    """Rooted tree whose leaves are agent ids and internal nodes are labeled groups."""

    root: GroupNode

    def agents(self) -> list:
        return list(self.root.agents())

    def validate(self, agents: Sequence[str]) -> None:
        leaves = self.agents()
        seen = set()
        for a in leaves:
            if a in seen:
                raise InvalidPartition(f"agent {a!r} appears more than once")
            seen.add(a)
        missing = [a for a in agents if a not in seen]
        extra = [a for a in leaves if a not in set(agents)]
        if missing:
            raise InvalidPartition(f"agents missing from tree: {missing}")
        if extra:
            raise InvalidPartition(f"unknown agents in tree: {extra}")

    @classmethod
    def flat(cls, agents: Sequence[str], label: str = "root") -> "GroupTree":
        return cls(GroupNode(label, tuple(agents)))

    @classmethod
    def singletons(cls, agents: Sequence[str], label: str = "root") -> "GroupTree":
        return cls(GroupNode(label, tuple(GroupNode(a, (a,)) for a in agents)))

    @classmethod
    def from_paths(cls, agents: Sequence[str], paths: Sequence[Sequence[str]], label: str = "root") -> "GroupTree":
        """Build a tree from one group path per agent.

        An empty path places the agent directly under the root. Children keep
        first-appearance order so the tree is deterministic.
        """
        if len(agents) != len(paths):
            raise InvalidPartition(f"{len(paths)} group paths for {len(agents)} agents")
        agent_set = set(agents)
        root: dict = {}
        for agent, path in zip(agents, paths):
            node = root
            for depth, name in enumerate(path):
                if not isinstance(name, str) or name == "":
                    raise InvalidPartition(f"agent {agent!r}: empty group name at depth {depth}")
                if name in agent_set:
                    raise InvalidPartition(f"group name {name!r} collides with an agent id")
                node = node.setdefault(("group", name), {})
            node[("agent", agent)] = None

        def build(name, spec):
            kids = []
            for (kind, key), sub in spec.items():
                kids.append(key if kind == "agent" else build(key, sub))
            return GroupNode(name, tuple(kids))

        return cls(build(label, root))


@dataclass(frozen=True)
class NodeDecomposition:
    """Decomposition of one tree node.

    ``weight`` is the absolute probability mass of the node's agents,
    ``total`` the entropy (bits) of the marginal restricted to and
    renormalized within the node, ``between_entropy`` the entropy over its
    children. ``theil_index`` is ln(n) - total*ln(2) in nats, ``None`` for a
    node with no mass.
    """

    label: str
    kind: str
    members: tuple
    weight: float
    between_entropy: float
    total: float
    theil_index: Optional[float]
    children: tuple = field(default=())

    def walk(self) -> Iterator["NodeDecomposition"]:
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass(frozen=True)
class GroupDecomposition:
    side: str
    root: NodeDecomposition

    def groups(self) -> list:
        return [n for n in self.root.walk() if n.kind == "group"]

    def find(self, label: str) -> NodeDecomposition:
        for n in self.root.walk():
            if n.label == label:
                return n
        raise KeyError(label)


def _decompose(node: Child, weight_of: dict) -> NodeDecomposition:
    if not isinstance(node, GroupNode):
        w = weight_of[node]
        return NodeDecomposition(node, "agent", (node,), w, 0.0, 0.0, 0.0 if w > 0.0 else None)
    children = tuple(_decompose(c, weight_of) for c in node.children)
    members = tuple(a for c in children for a in c.members)
    child_w = np.array([c.weight for c in children], dtype=np.float64)
    weight = float(child_w.sum())
    if weight > 0.0:
        between = float(_kernels.weight_entropy(child_w))
        total = between + float(sum(c.weight / weight * c.total for c in children))
        theil = math.log(len(members)) - total * LN2
    else:
        between, total, theil = 0.0, 0.0, None
    return NodeDecomposition(node.label, "group", members, weight, between, total, theil, children)


def group_decomposition(m: FlowMatrix, tree: GroupTree, side: str) -> GroupDecomposition:
    """Recursive grouping decomposition of the income (``"in"``) or spending (``"out"``) marginal.

    Savings are excluded; the marginal is over inter-agent flows only.
    """
    if side not in ("in", "out"):
        raise ValueError(f"side must be 'in' or 'out', got {side!r}")
    tree.validate(m.agents)
    off = m.off_diagonal()
    flows = off.sum(axis=0) if side == "in" else off.sum(axis=1)
    total = flows.sum()
    if not total > 0.0:
        raise UndefinedMarginal(f"{side}-marginal undefined: no inter-agent flow")
    weight_of = dict(zip(m.agents, (flows / total).tolist()))
    return GroupDecomposition(side, _decompose(tree.root, weight_of))
