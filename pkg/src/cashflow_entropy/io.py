"""Economy files in, reports and sweep grids out.

Two economy formats are supported: ``"csv"`` (a comma-separated matrix with
agents as header) and ``"json"`` (agents with optional group paths plus the
flow matrix). Output is deterministic byte-for-byte.
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .decomposition import AgentEntropyProfile, EntropyReport, GroupDecomposition, GroupTree, NodeDecomposition
from .errors import DimensionMismatch, DuplicateAgent, InvalidFlowMatrix, NegativeFlow, ParseError, ValidationError
from .flows import FlowMatrix

ECONOMY_KEYS = ("agents", "flows", "currency_label", "period_label")
AGENT_KEYS = ("id", "group_path")


@dataclass(frozen=True)
class EconomyFile:
    matrix: FlowMatrix
    group_paths: Optional[tuple] = None
    currency_label: Optional[str] = None
    period_label: Optional[str] = None

    def group_tree(self) -> Optional[GroupTree]:
        if self.group_paths is None or not any(self.group_paths):
            return None
        return GroupTree.from_paths(self.matrix.agents, self.group_paths)


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """One value per (x, y) cell; ``cells[i][j]`` is at (x_values[j], y_values[i]); None marks undefined."""

    x_name: str
    y_name: str
    x_values: tuple
    y_values: tuple
    cells: tuple = field(default=())

    def __post_init__(self):
        if len(self.cells) != len(self.y_values) or any(len(r) != len(self.x_values) for r in self.cells):
            raise DimensionMismatch(
                f"cells must be {len(self.y_values)}x{len(self.x_values)}"
            )

    def value(self, x, y):
        return self.cells[self.y_values.index(y)][self.x_values.index(x)]


# --- parsing ---------------------------------------------------------------

def _number(token, line, column):
    try:
        v = float(token)
    except (TypeError, ValueError):
        raise ParseError(f"not a number: {token!r}", line, column) from None
    return v


def _check_matrix(agents, rows, row_label):
    n = len(agents)
    seen = set()
    for a in agents:
        if a == "":
            raise InvalidFlowMatrix("empty agent identifier")
        if a in seen:
            raise DuplicateAgent(f"duplicate agent {a!r}")
        seen.add(a)
    if len(rows) != n:
        raise DimensionMismatch(f"{len(rows)} flow rows for {n} agents")
    for j, row in enumerate(rows):
        if len(row) != n:
            raise DimensionMismatch(f"{row_label(j)} has {len(row)} entries, expected {n}")
        for k, v in enumerate(row):
            if not math.isfinite(v):
                raise InvalidFlowMatrix(f"non-finite flow from {agents[j]!r} to {agents[k]!r}")
            if v < 0.0:
                raise NegativeFlow(f"negative flow {v!r} from {agents[j]!r} to {agents[k]!r}")


def _parse_csv(text: str) -> EconomyFile:
    records = [(i + 1, r) for i, r in enumerate(csv.reader(io.StringIO(text, newline=""))) if r]
    if not records:
        raise ParseError("empty economy file", 1, 1)
    line, header = records[0]
    if header[0].strip() != "agent":
        raise ParseError(f"header must start with 'agent', got {header[0]!r}", line, 1)
    agents = [h.strip() for h in header[1:]]
    rows = []
    for idx, (line, rec) in enumerate(records[1:]):
        rid = rec[0].strip()
        if idx < len(agents) and rid != agents[idx]:
            raise ValidationError(f"line {line}: row agent {rid!r} does not match header agent {agents[idx]!r}")
        rows.append([_number(tok, line, col + 2) for col, tok in enumerate(rec[1:])])
    row_lines = [line for line, _ in records[1:]]
    _check_matrix(agents, rows, lambda j: f"row {agents[j]!r} (line {row_lines[j]})")
    return EconomyFile(FlowMatrix(tuple(agents), np.array(rows, dtype=np.float64)))


def _parse_json(text: str) -> EconomyFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    unknown = sorted(set(doc) - set(ECONOMY_KEYS))
    if unknown:
        raise ValidationError(f"unknown keys: {unknown}")
    for key in ("agents", "flows"):
        if key not in doc:
            raise ValidationError(f"missing key {key!r}")
    if not isinstance(doc["agents"], list) or not isinstance(doc["flows"], list):
        raise ValidationError("'agents' and 'flows' must be arrays")
    agents, paths = [], []
    for i, entry in enumerate(doc["agents"]):
        if isinstance(entry, str):
            entry = {"id": entry}
        if not isinstance(entry, dict) or "id" not in entry:
            raise ValidationError(f"agents[{i}] must be an object with an 'id'")
        extra = sorted(set(entry) - set(AGENT_KEYS))
        if extra:
            raise ValidationError(f"agents[{i}]: unknown keys {extra}")
        if not isinstance(entry["id"], str):
            raise ValidationError(f"agents[{i}].id must be a string")
        path = entry.get("group_path", [])
        if path is None:
            path = []
        if not isinstance(path, list) or not all(isinstance(p, str) for p in path):
            raise ValidationError(f"agents[{i}].group_path must be an array of strings")
        agents.append(entry["id"])
        paths.append(tuple(path))
    rows = []
    for j, row in enumerate(doc["flows"]):
        if not isinstance(row, list):
            raise ValidationError(f"flows[{j}] must be an array")
        vals = []
        for k, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValidationError(f"flows[{j}][{k}] is not a number: {v!r}")
            vals.append(float(v))
        rows.append(vals)
    _check_matrix(agents, rows, lambda j: f"flows row {j} (agent {agents[j]!r})")
    for key in ("currency_label", "period_label"):
        if key in doc and not isinstance(doc[key], str):
            raise ValidationError(f"{key} must be a string")
    economy = EconomyFile(
        FlowMatrix(tuple(agents), np.array(rows, dtype=np.float64).reshape(len(agents), len(agents))),
        tuple(paths) if any(paths) else None,
        doc.get("currency_label"),
        doc.get("period_label"),
    )
    economy.group_tree()  # surfaces inconsistent taxonomies at load time
    return economy


def read_economy(data: bytes, format: str) -> EconomyFile:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc.reason}", None, None) from None
    if text.startswith("\ufeff"):
        text = text[1:]
    if not text.strip():
        raise ParseError("empty economy file", 1, 1)
    if format == "csv":
        return _parse_csv(text)
    if format == "json":
        return _parse_json(text)
    raise ValueError(f"unknown economy format {format!r}")


def load_economy(data: bytes, format: str):
    """Parse an economy file; returns ``(FlowMatrix, GroupTree or None)``."""
    economy = read_economy(data, format)
    return economy.matrix, economy.group_tree()


def detect_format(path: str, data: bytes) -> str:
    lower = path.lower()
    if lower.endswith(".json"):
        return "json"
    if lower.endswith(".csv"):
        return "csv"
    return "json" if data.lstrip()[:1] in (b"{", b"[") else "csv"


# --- writing ---------------------------------------------------------------

def _shortest(x: float) -> str:
    return repr(float(x))


def write_economy(economy, format: str = "json") -> bytes:
    """Serialize an EconomyFile (or bare FlowMatrix) with shortest round-trip numbers."""
    if isinstance(economy, FlowMatrix):
        economy = EconomyFile(economy)
    m = economy.matrix
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["agent", *m.agents])
        for a, row in zip(m.agents, m.entries):
            w.writerow([a, *(_shortest(v) for v in row)])
        return buf.getvalue().encode("utf-8")
    if format != "json":
        raise ValueError(f"unknown economy format {format!r}")
    lines = ["{", '  "agents": [']
    paths = economy.group_paths or ((),) * m.n
    agent_lines = []
    for a, path in zip(m.agents, paths):
        entry = {"id": a}
        if path:
            entry["group_path"] = list(path)
        agent_lines.append("    " + json.dumps(entry, ensure_ascii=False))
    lines.append(",\n".join(agent_lines))
    lines.append("  ],")
    flow_lines = ["    [" + ", ".join(_shortest(v) for v in row) + "]" for row in m.entries]
    tail = []
    for key in ("currency_label", "period_label"):
        value = getattr(economy, key)
        if value is not None:
            tail.append(f"  {json.dumps(key)}: {json.dumps(value, ensure_ascii=False)}")
    lines.append('  "flows": [')
    lines.append(",\n".join(flow_lines))
    lines.append("  ]" + ("," if tail else ""))
    if tail:
        lines.append(",\n".join(tail))
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _num(x):
    """Round to 12 significant digits; None stays None (rendered as null)."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def _node_doc(node: NodeDecomposition) -> dict:
    doc = {
        "label": node.label,
        "kind": node.kind,
        "weight": _num(node.weight),
        "between_entropy": _num(node.between_entropy),
        "total": _num(node.total),
        "theil_index": _num(node.theil_index),
    }
    if node.kind == "group":
        doc["members"] = list(node.members)
        doc["children"] = [_node_doc(c) for c in node.children]
    return doc


def write_report(report: EntropyReport, profile: Optional[AgentEntropyProfile],
                 groups: Optional[GroupDecomposition] = None, agents: Sequence[str] = ()) -> bytes:
    """Analysis document with keys totals, agents, groups, residuals.

    ``agents`` names the agents when ``profile`` is None (savings-only
    economies); their per-agent fields are then null.
    """
    totals = {
        "H": _num(report.total_H),
        "H_sc": _num(report.H_sc),
        "H_s": _num(report.H_s),
        "H_c": _num(report.H_c),
        "p_s": _num(report.p_s),
        "p_c": _num(report.p_c),
        "H_out_agg": _num(report.H_out_agg),
        "H_in_agg": _num(report.H_in_agg),
    }
    if profile is not None:
        diff = profile.differential
        agent_docs = [
            {
                "id": a,
                "out_prob": _num(profile.out_prob[i]),
                "in_prob": _num(profile.in_prob[i]),
                "out_entropy": _num(profile.out_entropy[i]),
                "in_entropy": _num(profile.in_entropy[i]),
                "differential": _num(diff[i]),
            }
            for i, a in enumerate(profile.agents)
        ]
        balance = _num(float(np.dot(profile.out_prob, diff)))
    else:
        agent_docs = [
            {"id": a, "out_prob": None, "in_prob": None, "out_entropy": None, "in_entropy": None, "differential": None}
            for a in agents
        ]
        balance = None
    residuals = {
        "savings_identity": _num(report.savings_identity_residual),
        "sum_identity": _num(report.sum_identity_residual),
        "difference_identity": _num(report.diff_identity_residual),
        "weighted_differential": balance,
    }
    doc = {
        "totals": totals,
        "agents": agent_docs,
        "groups": None if groups is None else {"side": groups.side, "root": _node_doc(groups.root)},
        "residuals": residuals,
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n").encode("utf-8")


def write_sweep(grid: SweepGrid) -> bytes:
    """Long-format ``x,y,value`` rows, y-major; undefined cells have an empty value."""
    out = ["x,y,value"]
    for i, y in enumerate(grid.y_values):
        for j, x in enumerate(grid.x_values):
            v = grid.cells[i][j]
            out.append(f"{_shortest(x)},{_shortest(y)},{'' if v is None else _shortest(v)}")
    return ("\n".join(out) + "\n").encode("utf-8")
