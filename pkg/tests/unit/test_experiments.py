import pytest

from extrapbenchlib.config import validate_spec
from extrapbenchlib.errors import ConfigError
from extrapbenchlib.experiments import (
    FIGURE_SETS,
    TABLES,
    figure_specs,
    history_filename,
    table_specs,
    with_outputs,
)


def test_table1_rows():
    specs = table_specs(1)
    assert len(specs) == 60
    assert {s.stepper for s in specs} == {"pgd", "sgd"}
    assert all(s.q == 6 for s in specs if s.stepper == "sgd")
    assert all(s.n == 100 for s in specs)


def test_table2_rows():
    specs = table_specs(2)
    assert len(specs) == 24
    assert all(s.alpha == 0.0 for s in specs)
    assert {s.q for s in specs if s.stepper == "sgd" and s.lam == 1e4} == {2}


def test_table3_respects_max_n():
    assert len(table_specs(3, max_n=1_000)) == 10
    assert len(table_specs(3)) == 18
    assert all(s.problem == "sparse" for s in table_specs(3))
    assert all(s.extrap is None for s in table_specs(3) if s.stepper == "gn")


@pytest.mark.parametrize("which", TABLES)
def test_table_specs_are_valid(which):
    for spec in table_specs(which, max_n=1_000):
        assert validate_spec(spec) == spec


@pytest.mark.parametrize("which", FIGURE_SETS)
def test_figure_history_files_are_unique(which):
    specs = figure_specs(which)
    names = [history_filename(s) for s in specs]
    assert len(set(names)) == len(names)


def test_with_outputs_sets_history_paths(tmp_path):
    specs = with_outputs(figure_specs("extrap-comparison"), str(tmp_path))
    assert [s.history_path for s in specs] == [
        str(tmp_path / "bratu_n100_a1_l10_rre-6-pgd.csv"),
        str(tmp_path / "bratu_n100_a1_l10_mpe-6-pgd.csv"),
        str(tmp_path / "bratu_n100_a1_l10_vea-3-pgd.csv"),
    ]


def test_unknown_sets():
    with pytest.raises(ConfigError):
        table_specs(4)
    with pytest.raises(ConfigError):
        figure_specs("bratu-surface")


def test_bratu_grid_sweeps_n():
    specs = figure_specs("bratu-grid")
    assert len(specs) == 40
    assert sorted({s.n for s in specs}) == [50, 100, 200, 400]
    assert {(s.alpha, s.lam) for s in specs} == {(0.0, 10.0), (1.0, 10.0)}
    at_100 = [s for s in specs if s.n == 100 and s.alpha == 1.0]
    assert sorted((s.stepper, s.extrap) for s in at_100) == [
        ("gn", None), ("pgd", "mpe"), ("pgd", "rre"), ("sgd", "mpe"), ("sgd", "rre"),
    ]
    assert all(validate_spec(s) == s for s in specs)


def test_sparse_fixed_includes_plain_steppers():
    specs = figure_specs("sparse-fixed")
    assert {s.n for s in specs} == {1_000}
    assert [(s.stepper, s.extrap) for s in specs] == [
        ("gd", None), ("sgd", None), ("gn", None), ("sgd", "rre"), ("sgd", "mpe"),
    ]
    assert all(s.q == 1 for s in specs)
    assert all(validate_spec(s) == s for s in specs)
