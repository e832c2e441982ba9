"""
Feature: Scan grid execution
  As a researcher
  I want independent conductance tasks evaluated in parallel
  So that scans over (m, p) finish faster without changing their results

Scenario: Sequential and parallel runs agree
  Given a small grid of tasks
  When it runs with one and with two workers
  Then the reports are identical and in task order
"""

import pytest
from pydantic import ValidationError

from lab.bounds import center_cell, corner_cell
from lattice.builtins import builtin_spec
from tasks.scan_tasks import ConductanceTask, run_conductance_task, run_grid


@pytest.fixture(name="tasks")
def tasks_fixture():
    spec = builtin_spec("F2")
    return [ConductanceTask(spec=spec, n=1, cell=cell, m=m, p=p)
            for m in (0, 1) for p in (1.5, 2.0) for cell in (corner_cell(2), center_cell(2))]


def test_parallel_matches_sequential(tasks):
    sequential = run_grid(tasks, threads=1)
    parallel = run_grid(tasks, threads=2)
    assert [r.model_dump() for r in parallel] == [r.model_dump() for r in sequential]
    assert [(r.m, r.p, r.cell) for r in sequential] == [(t.m, t.p, t.cell.label) for t in tasks]


def test_single_task(tasks):
    report = run_conductance_task(tasks[1])
    assert report.cell == "3,3" and report.m == 0
    g = 1 / 26
    assert report.computed == pytest.approx(4 * ((1 - g) ** 1.5 + 5 * g ** 1.5), rel=1e-6)


def test_empty_grid():
    assert run_grid([], threads=4) == []


def test_invalid_task():
    with pytest.raises(ValidationError):
        ConductanceTask(spec=builtin_spec("F2"), n=1, cell=corner_cell(2), m=1, p=1.0)
