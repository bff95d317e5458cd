"""Stationarity checks and constructors for balanced example economies."""
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    InfeasibleParameters,
    SingularSystem,
    UnreachableBalance,
    ValidationError,
    ZeroInteragentFlow,
)
from .flows import FlowMatrix

IMBALANCE_FLOOR = 1e-300
DET_THRESHOLD = 1e-12
IPF_TOL = 1e-12
IPF_MAX_ITER = 10_000


@dataclass(frozen=True)
class StationarityCheck:
    max_relative_imbalance: float
    is_stationary: bool
    fixed_point_residual: float
    tolerance: float


def transition_matrix(m: FlowMatrix) -> np.ndarray:
    """Row-conditional matrix p^(j)_k; rows of agents without out-flow are zero."""
    c = m.off_diagonal()
    rows = c.sum(axis=1)
    return c / np.where(rows > 0.0, rows, 1.0)[:, None]


def check_stationarity(m: FlowMatrix, tolerance: float) -> StationarityCheck:
    """Compare each agent's out-flow with its in-flow (savings excluded).

    The fixed-point residual is the L-infinity norm of p P - p where p are
    the out-probabilities and P the row-conditional matrix.
    """
    c = m.off_diagonal()
    out_flows = c.sum(axis=1)
    in_flows = c.sum(axis=0)
    total = out_flows.sum()
    if not total > 0.0:
        raise ZeroInteragentFlow("no inter-agent flow")
    scale = np.maximum(np.maximum(out_flows, in_flows), IMBALANCE_FLOOR)
    imbalance = float(np.max(np.abs(out_flows - in_flows) / scale))
    p = out_flows / total
    residual = float(np.max(np.abs(p @ transition_matrix(m) - p)))
    return StationarityCheck(imbalance, imbalance <= tolerance, residual, tolerance)


def build_two_agent(a: float, b: float) -> FlowMatrix:
    """[[a, 1], [1, b]]: savings a and b relative to unit cross-flows."""
    for name, v in (("a", a), ("b", b)):
        if not (math.isfinite(v) and v >= 0.0):
            raise ValidationError(f"{name} must be finite and >= 0, got {v!r}")
    return FlowMatrix(("1", "2"), np.array([[a, 1.0], [1.0, b]]))


def three_agent_flows(a: float, b: float, k: float):
    """Solve for the agent flows (c^1, c^2, c^3) with c^1+c^2+c^3 = 3.

    Closed-form via the cofactors of the last row of
    B = [[-1, 1-b, k], [a, -1, 1-k], [1, 1, 1]].
    """
    cof = (
        (1.0 - b) * (1.0 - k) + k,
        (1.0 - k) + a * k,
        1.0 - a * (1.0 - b),
    )
    det = cof[0] + cof[1] + cof[2]
    if abs(det) < DET_THRESHOLD:
        raise SingularSystem(f"singular system at a={a!r}, b={b!r}, k={k!r} (det={det!r})")
    return tuple(3.0 * x / det for x in cof)


def build_three_agent(a: float, b: float, k: float) -> FlowMatrix:
    """Stationary zero-savings 3-agent economy with out-flow shares a, b, k.

    a = c^1_2/c^1, b = c^2_3/c^2, k = c^3_1/c^3, normalized so the mean
    agent out-flow is 1.
    """
    for name, v in (("a", a), ("b", b), ("k", k)):
        if not (math.isfinite(v) and 0.0 <= v <= 1.0):
            raise ValidationError(f"{name} must lie in [0, 1], got {v!r}")
    c1, c2, c3 = three_agent_flows(a, b, k)
    if min(c1, c2, c3) <= 0.0:
        raise InfeasibleParameters(
            f"parameters a={a!r}, b={b!r}, k={k!r} give non-positive agent flow {(c1, c2, c3)!r}"
        )
    entries = np.array([
        [0.0, a * c1, (1.0 - a) * c1],
        [(1.0 - b) * c2, 0.0, b * c2],
        [k * c3, (1.0 - k) * c3, 0.0],
    ])
    return FlowMatrix(("1", "2", "3"), entries)


def _stationary_vector(p: np.ndarray) -> np.ndarray:
    n = p.shape[0]
    a = p.T - np.eye(n)
    a[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    return np.linalg.solve(a, rhs)


def random_stationary(n: int, seed: int, sparsity: float = 0.0) -> FlowMatrix:
    """Deterministic random zero-savings economy with c^j = c_j for every agent.

    A random positive off-diagonal matrix is thinned by ``sparsity`` (a random
    directed cycle through all agents is always kept, so the economy stays
    irreducible) and balanced by iterative proportional fitting toward equal
    row and column targets. The targets are the stationary distribution pi of
    the matrix's own row-normalized walk P: the first row pass then yields
    diag(pi) P, whose column sums are pi, so fitting converges on any
    irreducible support instead of crawling on near-decomposable ones.
    Flows are scaled to a mean out-flow of 1.
    """
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    if not 0.0 <= sparsity < 1.0:
        raise ValidationError(f"sparsity must lie in [0, 1), got {sparsity!r}")
    rng = np.random.default_rng(seed)
    off = ~np.eye(n, dtype=bool)
    keep = off & (rng.random((n, n)) >= sparsity)
    order = rng.permutation(n)
    keep[order, np.roll(order, -1)] = True

    seed_flows = np.where(keep, rng.lognormal(0.0, 1.0, (n, n)), 0.0)
    target = _stationary_vector(seed_flows / seed_flows.sum(axis=1, keepdims=True))
    if not np.all(target > 0.0):
        raise UnreachableBalance("degenerate balance targets")

    balanced, _, imbalance = _kernels.ipf_balance(
        np.ascontiguousarray(seed_flows), np.ascontiguousarray(target), IPF_TOL, IPF_MAX_ITER
    )
    if not imbalance <= IPF_TOL:
        raise UnreachableBalance(f"balancing did not converge in {IPF_MAX_ITER} iterations (imbalance {imbalance:.3e})")
    balanced = np.asarray(balanced) * (n / balanced.sum())
    return FlowMatrix(tuple(f"a{i + 1}" for i in range(n)), balanced)
