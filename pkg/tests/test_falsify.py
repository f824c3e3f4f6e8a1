import pytest

from projpencil.falsify import FalsifyConfig, FalsifyReport, run_falsify


def test_small_run_is_clean():
    rep = run_falsify(FalsifyConfig(trials=300, max_dim=6, seed=1))
    assert rep.passed, rep.violations[:3]
    assert sum(rep.sources.values()) == 300
    assert max(rep.admissible_sizes) <= 2
    assert rep.worst_residual < 1e-9


def test_deterministic_and_worker_independent():
    a = run_falsify(FalsifyConfig(trials=40, seed=5)).to_dict()
    b = run_falsify(FalsifyConfig(trials=40, seed=5)).to_dict()
    c = run_falsify(FalsifyConfig(trials=40, seed=5, workers=2)).to_dict()
    assert a == b == c


def test_config_validation():
    with pytest.raises(ValueError):
        FalsifyConfig(trials=0)
    with pytest.raises(ValueError):
        FalsifyConfig(max_dim=0)


def test_report_round_trip():
    rep = run_falsify(FalsifyConfig(trials=20, seed=2))
    assert FalsifyReport.from_dict(rep.to_dict()).to_dict() == rep.to_dict()
