import math

import numpy as np
import pytest

from cashflow_entropy.decomposition import (
    GroupNode,
    GroupTree,
    differential_balance,
    full_report,
    group_decomposition,
    identity_residuals,
)
from cashflow_entropy.errors import InvalidPartition, UndefinedMarginal, ZeroInteragentFlow
from cashflow_entropy.flows import FlowMatrix
from cashflow_entropy.steady_state import build_three_agent, build_two_agent, random_stationary

import oracles
from oracles import PRINTED_DIFFERENTIAL, PRINTED_IN_ENTROPY, PRINTED_IN_PROB, PRINTED_MATRIX, PRINTED_OUT_ENTROPY


def test_printed_example_profile():
    _, prof = full_report(FlowMatrix.from_array(PRINTED_MATRIX))
    np.testing.assert_allclose(prof.in_entropy, PRINTED_IN_ENTROPY, atol=5e-4)
    np.testing.assert_allclose(prof.out_entropy, PRINTED_OUT_ENTROPY, atol=5e-4)
    np.testing.assert_allclose(prof.differential, PRINTED_DIFFERENTIAL, atol=5e-4)
    np.testing.assert_allclose(prof.in_prob, PRINTED_IN_PROB, atol=5e-4)


def test_report_matches_definitions_on_printed_matrix():
    report, prof = full_report(FlowMatrix.from_array(PRINTED_MATRIX))
    ref = oracles.decomposition(PRINTED_MATRIX)
    assert report.total_H == pytest.approx(ref["total"], abs=1e-12)
    assert report.H_c == pytest.approx(ref["H_c"], abs=1e-12)
    assert report.H_out_agg == pytest.approx(ref["H_prime"], abs=1e-12)
    assert report.H_in_agg == pytest.approx(ref["H_dprime"], abs=1e-12)
    np.testing.assert_allclose(prof.out_entropy, ref["H_out"], atol=1e-12)
    np.testing.assert_allclose(prof.in_entropy, ref["H_in"], atol=1e-12)
    assert abs(report.sum_identity_residual) <= 1e-10
    assert abs(report.diff_identity_residual) <= 1e-10


@pytest.mark.parametrize("a,b", [(0, 0), (1, 1), (3, 1), (0.2, 2.5)])
def test_two_agent_inter_agent_entropy_is_one(a, b):
    report, prof = full_report(build_two_agent(a, b))
    assert report.H_c == 1.0
    np.testing.assert_array_equal(prof.differential, [0.0, 0.0])
    assert differential_balance(prof, stationary=True) == 0.0


def test_no_savings_swap_economy():
    report, prof = full_report(FlowMatrix.from_array([[0, 1], [1, 0]]))
    assert report.total_H == 1.0
    assert report.H_sc == 0.0
    assert report.H_s is None
    assert report.H_out_agg == report.H_in_agg == 1.0
    np.testing.assert_array_equal(prof.out_entropy, [0, 0])
    np.testing.assert_array_equal(prof.in_entropy, [0, 0])
    assert identity_residuals(FlowMatrix.from_array([[0, 1], [1, 0]])) == (0.0, 0.0)


def test_savings_only_economy():
    report, prof = full_report(FlowMatrix.from_array([[3, 0], [0, 1]]))
    assert prof is None
    assert report.H_c is None and report.H_out_agg is None and report.sum_identity_residual is None
    assert report.p_s == 1.0 and report.H_sc == 0.0
    assert report.H_s == pytest.approx(oracles.H([3, 1]), abs=1e-15)
    assert report.total_H == pytest.approx(report.H_s, abs=1e-15)
    with pytest.raises(ZeroInteragentFlow):
        identity_residuals(FlowMatrix.from_array([[3, 0], [0, 1]]))


def test_savings_split_identity_with_savings():
    c = [[2, 1, 0.5], [0.3, 4, 1], [1, 2, 0.7]]
    report, _ = full_report(FlowMatrix.from_array(c))
    diag = [2, 4, 0.7]
    off = [1, 0.5, 0.3, 1, 1, 2]
    p_s = sum(diag) / (sum(diag) + sum(off))
    H_sc = -p_s * math.log2(p_s) - (1 - p_s) * math.log2(1 - p_s)
    assert report.H_sc == pytest.approx(H_sc, abs=1e-14)
    assert report.total_H == pytest.approx(H_sc + p_s * oracles.H(diag) + (1 - p_s) * oracles.H(off), abs=1e-12)
    assert abs(report.savings_identity_residual) <= 1e-12


def test_printed_balance_with_rounded_values():
    total = sum(p * d for p, d in zip(PRINTED_IN_PROB, PRINTED_DIFFERENTIAL))
    assert abs(total) <= 2e-4


def test_balance_on_solved_worked_economy():
    _, prof = full_report(build_three_agent(0.1, 0.3, 0.7))
    assert abs(differential_balance(prof, stationary=True)) <= 1e-12
    assert abs(differential_balance(prof, stationary=False)) <= 1e-12


def test_balance_on_random_stationary():
    m = random_stationary(5, 7, 0.0)
    _, prof = full_report(m)
    ref = oracles.decomposition(m.entries.tolist())
    direct = sum(p * (hi - ho) for p, hi, ho in zip(ref["p_out"], ref["H_in"], ref["H_out"]))
    assert abs(differential_balance(prof, stationary=True) - direct) <= 1e-12
    assert abs(differential_balance(prof, stationary=True)) <= 1e-10


def test_general_balance_nonstationary():
    rng = np.random.default_rng(3)
    c = oracles.random_flow_matrix(rng, 8)
    _, prof = full_report(FlowMatrix.from_array(c))
    assert abs(differential_balance(prof, stationary=False)) <= 1e-10
    # the stationary form does not vanish off stationarity
    assert abs(differential_balance(prof, stationary=True)) > 1e-6


def test_identity_residuals_random_nonstationary():
    rng = np.random.default_rng(11)
    for _ in range(50):
        c = oracles.random_flow_matrix(rng, 8, sparsity=0.3)
        s, d = identity_residuals(FlowMatrix.from_array(c))
        assert abs(s) <= 1e-10 and abs(d) <= 1e-10


def test_printed_halved_difference_identity_does_not_hold():
    # The halved form (H''-H')/2 + sum(...) is non-zero in general; the
    # un-halved form is the one that vanishes.
    ref = oracles.decomposition([[0, 1, 3], [2, 0, 0.5], [0.1, 4, 0]])
    weighted = sum(pi * hi - po * ho for pi, hi, po, ho in zip(ref["p_in"], ref["H_in"], ref["p_out"], ref["H_out"]))
    gap = ref["H_dprime"] - ref["H_prime"]
    assert abs(gap + weighted) <= 1e-12
    assert abs(gap / 2 + weighted) > 1e-3


# --- group decomposition -------------------------------------------------

def uniform_economy(n):
    c = np.ones((n, n))
    np.fill_diagonal(c, 0.0)
    return FlowMatrix.from_array(c)


def test_flat_tree_between_is_marginal_entropy():
    m = FlowMatrix.from_array(PRINTED_MATRIX)
    report, _ = full_report(m)
    g = group_decomposition(m, GroupTree.flat(m.agents), "in")
    assert g.root.between_entropy == pytest.approx(report.H_in_agg, abs=1e-12)
    assert all(c.kind == "agent" and c.total == 0.0 for c in g.root.children)


def test_singleton_tree():
    m = FlowMatrix.from_array(PRINTED_MATRIX)
    report, _ = full_report(m)
    g = group_decomposition(m, GroupTree.singletons(m.agents), "in")
    assert g.root.between_entropy == pytest.approx(report.H_in_agg, abs=1e-12)
    assert [c.total for c in g.root.children] == [0.0, 0.0, 0.0]


def test_two_groups_of_two_uniform():
    m = uniform_economy(4)
    tree = GroupTree(GroupNode("root", (GroupNode("A", ("1", "2")), GroupNode("B", ("3", "4")))))
    g = group_decomposition(m, tree, "in")
    assert g.root.between_entropy == pytest.approx(1.0, abs=1e-15)
    assert [c.total for c in g.root.children] == pytest.approx([1.0, 1.0], abs=1e-15)
    assert g.root.total == pytest.approx(2.0, abs=1e-15)
    assert g.root.theil_index == pytest.approx(0.0, abs=1e-12)


def test_node_identity_and_flat_total_on_random_trees():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(2, 12))
        m = FlowMatrix.from_array(oracles.random_flow_matrix(rng, n, sparsity=0.3))
        tree = GroupTree.from_paths(m.agents, oracles.random_tree_paths(rng, m.agents))
        report, _ = full_report(m)
        for side, flat in (("in", report.H_in_agg), ("out", report.H_out_agg)):
            g = group_decomposition(m, tree, side)
            assert abs(g.root.total - flat) <= 1e-10
            for node in g.groups():
                if node.weight > 0:
                    recomposed = node.between_entropy + sum(c.weight / node.weight * c.total for c in node.children)
                    assert abs(node.total - recomposed) <= 1e-10
                    assert node.theil_index >= -1e-12


def test_sides_coincide_under_stationarity():
    m = random_stationary(6, 2, 0.3)
    tree = GroupTree.from_paths(m.agents, [("x",), ("x",), ("y",), ("y",), ("y",), ()])
    gin, gout = group_decomposition(m, tree, "in"), group_decomposition(m, tree, "out")
    for a, b in zip(gin.root.walk(), gout.root.walk()):
        assert a.weight == pytest.approx(b.weight, abs=1e-10)
        assert a.total == pytest.approx(b.total, abs=1e-9)


def test_tree_validation():
    m = FlowMatrix.from_array(PRINTED_MATRIX)
    with pytest.raises(InvalidPartition):
        group_decomposition(m, GroupTree.flat(["1", "2"]), "in")
    with pytest.raises(InvalidPartition):
        group_decomposition(m, GroupTree.flat(["1", "2", "3", "3"]), "in")
    with pytest.raises(InvalidPartition):
        group_decomposition(m, GroupTree.flat(["1", "2", "3", "4"]), "in")
    with pytest.raises(InvalidPartition):
        GroupTree.from_paths(["1", "2"], [("1",), ()])
    with pytest.raises(UndefinedMarginal):
        group_decomposition(FlowMatrix.from_array([[1, 0], [0, 1]]), GroupTree.flat(["1", "2"]), "in")
    with pytest.raises(ValueError):
        group_decomposition(m, GroupTree.flat(m.agents), "sideways")


def test_from_paths_structure():
    tree = GroupTree.from_paths(["p1", "p2", "c1"], [("Persons",), ("Persons",), ("Corporates",)])
    labels = [c.label for c in tree.root.children]
    assert labels == ["Persons", "Corporates"]
    assert tree.agents() == ["p1", "p2", "c1"]
