"""Entropy decomposition of inter-agent cash flows."""
from .decomposition import (
    AgentEntropyProfile,
    EntropyReport,
    GroupDecomposition,
    GroupNode,
    GroupTree,
    differential_balance,
    full_report,
    group_decomposition,
    identity_residuals,
)
from .entropy import K, GroupedDistribution, entropy, entropy_unnormalized, grouped_entropy_decomposition
from .flows import FlowMatrix, conditionals, marginals, savings_split, to_probability_matrix
from .io import EconomyFile, SweepGrid, load_economy, read_economy, write_economy, write_report, write_sweep
from .steady_state import build_three_agent, build_two_agent, check_stationarity, random_stationary

__version__ = "0.1.0"
