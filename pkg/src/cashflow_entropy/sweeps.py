"""Parameter sweeps over the constructed two- and three-agent economies."""
import numpy as np

from .decomposition import full_report
from .errors import CashFlowError, ValidationError
from .io import SweepGrid
from .steady_state import build_three_agent, build_two_agent

TWO_AGENT_QUANTITIES = {
    "ps": lambda r: r.p_s,
    "Hs": lambda r: r.H_s,
    "Hsc": lambda r: r.H_sc,
    "H": lambda r: r.total_H,
}


def grid_values(lo: float, hi: float, resolution: int) -> tuple:
    if resolution < 2:
        raise ValidationError(f"resolution must be >= 2, got {resolution}")
    if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
        raise ValidationError(f"invalid range [{lo!r}, {hi!r}]")
    return tuple(float(v) for v in np.linspace(lo, hi, resolution))


def two_agent_cell(a: float, b: float):
    return full_report(build_two_agent(a, b))[0]


def three_agent_cell(a: float, b: float, k: float):
    """Report for one 3-agent cell, or None where the economy is singular or infeasible."""
    try:
        return full_report(build_three_agent(a, b, k))[0]
    except CashFlowError:
        return None


def sweep_two_agent(quantity: str, a_values, b_values) -> SweepGrid:
    if quantity not in TWO_AGENT_QUANTITIES:
        raise ValidationError(f"unknown quantity {quantity!r}; choose from {sorted(TWO_AGENT_QUANTITIES)}")
    if min(a_values) < 0.0 or min(b_values) < 0.0:
        raise ValidationError("savings ranges must be non-negative")
    pick = TWO_AGENT_QUANTITIES[quantity]
    cells = tuple(tuple(pick(two_agent_cell(a, b)) for a in a_values) for b in b_values)
    return SweepGrid("a", "b", tuple(a_values), tuple(b_values), cells)


def sweep_three_agent(k: float, a_values, b_values) -> SweepGrid:
    """Total entropy H over (a, b) at fixed k; undefined cells are None."""
    if not 0.0 < k < 1.0:
        raise ValidationError(f"k must lie in (0, 1), got {k!r}")
    for v in (*a_values, *b_values):
        if not 0.0 < v < 1.0:
            raise ValidationError(f"sweep values must lie in (0, 1), got {v!r}")
    cells = []
    for b in b_values:
        row = []
        for a in a_values:
            r = three_agent_cell(a, b, k)
            row.append(None if r is None else r.total_H)
        cells.append(tuple(row))
    return SweepGrid("a", "b", tuple(a_values), tuple(b_values), tuple(cells))
