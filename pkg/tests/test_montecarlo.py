import pytest

from oracles import wilson_upper_closed_form
from seqcoin.core import ContractViolation, DomainError
from seqcoin.coinflipper import run
from seqcoin.montecarlo import TrialConfig, TrialError, run_trials, sweep, wilson_upper
from seqcoin.sources import derive_trial_source

Z99 = 2.3263478740408408


@pytest.mark.parametrize("s, n, expected", [(0, 100, 0.0513404531838), (50, 100, 0.613292159022), (3, 1000, 0.0104977555711)])
def test_wilson_upper_frozen(s, n, expected):
    assert float(wilson_upper_closed_form(s, n, Z99)) == pytest.approx(expected, rel=1e-11)
    assert wilson_upper(s, n, 0.99) == pytest.approx(expected, rel=1e-10)


def test_wilson_upper_edges():
    assert wilson_upper(100, 100, 0.99) == 1.0
    assert wilson_upper(7, 7, 0.5) == 1.0
    for s in range(0, 101, 5):
        u = wilson_upper(s, 100)
        assert s / 100 <= u <= 1
    assert 0.5 < wilson_upper(50, 100, 0.99) < 1
    with pytest.raises(ContractViolation):
        wilson_upper(0, 0)
    with pytest.raises(ContractViolation):
        wilson_upper(5, 4)


def test_single_trial_matches_transcript():
    cfg = TrialConfig(p=0.75, q="0.5", delta="0.1", trials=1, master_seed=11)
    stats = run_trials(cfg)
    t = run(derive_trial_source(11, 0, 0.75), "0.5", "0.1")
    assert stats.mean_iterations == t.iterations
    assert stats.mean_flips == t.total_flips
    assert stats.sem_iterations == stats.sem_flips == 0.0
    assert stats.wrong == int(t.decision.value == "YES")


def test_p_equals_q_needs_budget():
    with pytest.raises(DomainError):
        TrialConfig(p="0.5", q="0.5", delta="0.1", trials=10, master_seed=1)


def test_p_equals_q_all_undecided():
    stats = run_trials(TrialConfig(p="0.5", q="0.5", delta="0.1", trials=100, master_seed=1, budget=10**4))
    assert stats.undecided + stats.decisions == 100
    # each side's stopping chance is bounded by delta, so at most 2*delta of runs decide
    assert stats.decisions <= 20
    assert stats.wrong == 0
    assert stats.d is None
    assert stats.max_flips <= 10**4


def test_no_decisions_reported_with_flag():
    stats = run_trials(TrialConfig(p="0.5", q="0.5", delta="0.1", trials=5, master_seed=1, budget=100))
    assert stats.undecided == 5
    assert stats.error_rate == 0.0
    assert stats.error_rate_wilson_hi99 == 1.0
    assert not stats.error_rate_defined


def test_invalid_configs():
    with pytest.raises(ContractViolation):
        TrialConfig(p=0.6, q="0.5", delta="0.1", trials=0, master_seed=1)
    with pytest.raises(ContractViolation):
        TrialConfig(p=0.6, q="0.5", delta="0.1", trials=3, master_seed=1, algorithm="baseline")
    with pytest.raises(DomainError):
        TrialConfig(p=0.6, q="0.5", delta="0.1", trials=3, master_seed=1, algorithm="baseline", epsilon="0.5")
    with pytest.raises(ContractViolation):
        TrialConfig(p=0.6, q="0.5", delta="0.1", trials=3, master_seed=1, algorithm="sprt")


def test_trial_error_carries_index(monkeypatch):
    from seqcoin import montecarlo
    from seqcoin.schedule import BudgetOverflow

    def boom(*args, **kwargs):
        raise BudgetOverflow("cap")

    monkeypatch.setattr(montecarlo.coinflipper, "run", boom)
    with pytest.raises(TrialError) as err:
        run_trials(TrialConfig(p=0.6, q="0.5", delta="0.1", trials=3, master_seed=1))
    assert err.value.trial_index == 0


def test_parallel_matches_serial():
    cfg = TrialConfig(p=0.6, q="0.5", delta="0.2", trials=500, master_seed=99)
    assert run_trials(cfg, workers=1) == run_trials(cfg, workers=3)


def test_conservation_and_budget():
    stats = run_trials(TrialConfig(p=0.52, q="0.5", delta="0.1", trials=200, master_seed=4, budget=3000))
    assert stats.undecided + stats.decisions == 200
    assert stats.undecided > 0
    assert stats.max_flips <= 3000


def test_sweep_order_and_equivalence():
    grid = [TrialConfig(p=0.7, q="0.5", delta=d, trials=300, master_seed=5) for d in ("0.2", "0.1")]
    rows = sweep(grid)
    assert [r.config.delta for r in rows] == ["0.2", "0.1"]
    assert rows[0] == run_trials(grid[0])
    with pytest.raises(ContractViolation):
        sweep([])


def test_sweep_mean_flips_grow_as_delta_shrinks():
    grid = [TrialConfig(p=0.7, q="0.5", delta=d, trials=3000, master_seed=8) for d in ("0.2", "0.1", "0.05")]
    rows = sweep(grid)
    for a, b in zip(rows, rows[1:]):
        assert b.mean_flips + 2 * b.sem_flips >= a.mean_flips - 2 * a.sem_flips


def test_baseline_stats():
    stats = run_trials(TrialConfig(p="0.4", q="0.5", delta="0.1", trials=500, master_seed=2, algorithm="baseline", epsilon="0.1"))
    assert stats.mean_flips == 116.0 == stats.max_flips
    assert stats.mean_iterations == 1.0
    assert stats.flips_upper_bound == 116.0


def test_row_schema():
    stats = run_trials(TrialConfig(p=0.75, q="0.5", delta="0.1", trials=20, master_seed=7))
    row = stats.to_row()
    assert list(row) == [
        "p", "q", "delta", "trials", "wrong", "undecided", "error_rate", "wilson_hi99",
        "mean_iters", "sem_iters", "mean_flips", "sem_flips", "d", "iter_bound", "flips_bound",
    ]
    assert row["p"] == "0.75" and row["d"] == 2
