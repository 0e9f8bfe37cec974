"""Acceptance suite: one test per validation criterion, each printing its
pass/fail line.  The same checks back the ``capwaves validate`` command."""

import pytest

from capwaves import acceptance


def _run(check):
    result = check()
    print(result.line())
    assert result.passed, result.line()


def test_criterion_01_cluster_table_at_1e4():
    _run(acceptance.check_cluster_table_1e4)


def test_criterion_02_cluster_table_at_1e3():
    _run(acceptance.check_cluster_table_1e3)


def test_criterion_03_two_triad_count_at_1e3():
    _run(acceptance.check_two_triad_count_1e3)


def test_criterion_04_isolated_below_1e5():
    _run(acceptance.check_isolated_below_1e5)


def test_criterion_05_giant_cluster_at_1e2():
    _run(acceptance.check_giant_cluster_1e2)


def test_criterion_06_resonance_closure():
    _run(acceptance.check_resonance_closure)


def test_criterion_07_irrotational_control():
    _run(acceptance.check_irrotational_control)


def test_criterion_08_sigma_scaling():
    _run(acceptance.check_sigma_scaling)


def test_criterion_09_conservation_suite():
    _run(acceptance.check_conservation_suite)


def test_criterion_10_analytic_oracle():
    _run(acceptance.check_analytic_oracle)


def test_criterion_11_phase_behaviour():
    _run(acceptance.check_phase_behaviour)
