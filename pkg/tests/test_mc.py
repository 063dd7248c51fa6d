import os

import numpy as np
import pytest
from numpy.testing import assert_allclose

from flrcov import mc
from flrcov.dgp import RngStream, get_dgp, simulate, true_lrcov
from flrcov.fgrid import Grid
from flrcov.kernels import get_kernel

BARTLETT = get_kernel("bartlett")


def test_summarize_examples():
    s = mc.summarize([5, 1, 4, 2, 3])
    assert (s.min, s.q1, s.median, s.q3, s.max) == (1, 2, 3, 4, 5)
    s = mc.summarize([0.7] * 6)
    assert {s.min, s.q1, s.median, s.q3, s.max} == {0.7}
    assert mc.summarize([0, 1]).median == 0.5
    with pytest.raises(ValueError):
        mc.summarize([])


def test_summarize_is_type7(rng):
    x = rng.exponential(size=37)
    s = mc.summarize(x)
    srt = np.sort(x)

    def type7(p):
        h = (len(srt) - 1) * p
        lo = int(np.floor(h))
        return srt[lo] + (h - lo) * (srt[min(lo + 1, len(srt) - 1)] - srt[lo])

    assert_allclose([s.q1, s.median, s.q3], [type7(0.25), type7(0.5), type7(0.75)])
    assert s.min <= s.q1 <= s.median <= s.q3 <= s.max


def test_cell_validation():
    far = get_dgp("far1")
    with pytest.raises(ValueError):
        mc.ExperimentCell(far, BARTLETT, 6, 100)
    with pytest.raises(ValueError):
        mc.ExperimentCell(far, BARTLETT, 4, 100, reps=0)
    with pytest.raises(ValueError):
        mc.ExperimentCell(far, BARTLETT, 5, 19)
    with pytest.raises(ValueError):
        mc.ExperimentCell(far, get_kernel("flat-top"), 4, 100)


@pytest.mark.parametrize("setting", mc.SETTINGS)
def test_run_cell_determinism(setting):
    far = get_dgp("far1")
    cell = mc.ExperimentCell(far, BARTLETT, setting, 60, n=20, reps=1, seed=3)
    ref = true_lrcov(far, cell.grid)
    a, b = mc.run_cell(cell, ref), mc.run_cell(cell, ref)
    assert np.array_equal(a.losses, b.losses) and np.array_equal(a.bandwidths, b.bandwidths)
    assert a.to_dict() == b.to_dict()


def test_threads_do_not_change_results():
    far = get_dgp("far1")
    cell = mc.ExperimentCell(far, BARTLETT, 4, 80, n=20, reps=8, seed=5)
    ref = true_lrcov(far, cell.grid)
    a = mc.run_cell(cell, ref, threads=1)
    b = mc.run_cell(cell, ref, threads=4)
    assert np.array_equal(a.losses, b.losses)


def test_permuted_streams_give_same_sorted_losses():
    ma = get_dgp("ma1")
    cell = mc.ExperimentCell(ma, BARTLETT, 3, 50, n=15, reps=6, seed=2)
    ref = true_lrcov(ma, cell.grid)
    a = mc.run_cell(cell, ref, stream_ids=[0, 1, 2, 3, 4, 5])
    b = mc.run_cell(cell, ref, stream_ids=[5, 3, 1, 0, 4, 2])
    assert np.array_equal(np.sort(a.losses), np.sort(b.losses))
    assert np.array_equal(a.losses[[5, 3, 1, 0, 4, 2]], b.losses)


def test_settings_share_samples():
    # settings 3 and 4 see the same sample; only the pilot window differs
    far = get_dgp("far1")
    c3 = mc.ExperimentCell(far, BARTLETT, 3, 70, n=10, reps=1, seed=9)
    c4 = mc.ExperimentCell(far, BARTLETT, 4, 70, n=10, reps=1, seed=9)
    x = simulate(far, 70, Grid(10), RngStream(9, 0))
    ref = true_lrcov(far, Grid(10))
    from flrcov.acov import center
    from flrcov.fgrid import surface_distance_sq
    from flrcov.lrcov import lrcov_estimate

    for cell in (c3, c4):
        h, loss = mc.replicate(cell, ref, 0)
        h_direct, _ = mc.select_bandwidth(center(x), cell)
        assert h == h_direct
        assert loss == surface_distance_sq(lrcov_estimate(center(x), BARTLETT, h).surface, ref)


def test_losses_nonnegative_and_zero_only_on_exact_match():
    far = get_dgp("far1")
    cell = mc.ExperimentCell(far, BARTLETT, 1, 40, n=10, reps=5, seed=1)
    s = mc.run_cell(cell, true_lrcov(far, cell.grid))
    assert np.all(s.losses > 0)


def test_forced_bandwidth_and_reference_shape():
    far = get_dgp("far1")
    cell = mc.ExperimentCell(far, BARTLETT, 4, 40, n=10, reps=3, h=2.0)
    s = mc.run_cell(cell, true_lrcov(far, cell.grid))
    assert np.all(s.bandwidths == 2.0)
    with pytest.raises(ValueError):
        mc.run_cell(cell, np.zeros((5, 5)))


@pytest.mark.slow
def test_weak_dependence_settings_are_close():
    iid = get_dgp("ma0")
    ref = true_lrcov(iid, Grid(100))
    s1 = mc.run_cell(mc.ExperimentCell(iid, BARTLETT, 1, 500, reps=100, seed=13), ref)
    s4 = mc.run_cell(mc.ExperimentCell(iid, BARTLETT, 4, 500, reps=100, seed=13), ref)
    assert 0.5 <= s1.median / s4.median <= 2


@pytest.mark.slow
def test_strong_dependence_favours_plugin():
    far = get_dgp("far1")
    ref = true_lrcov(far, Grid(100))
    s1 = mc.run_cell(mc.ExperimentCell(far, BARTLETT, 1, 300, reps=100, seed=14), ref)
    s4 = mc.run_cell(mc.ExperimentCell(far, BARTLETT, 4, 300, reps=100, seed=14), ref)
    assert s4.median < s1.median


@pytest.mark.parametrize("setting", mc.SETTINGS)
def test_sweep_iid_loss_shrinks(setting):
    table = mc.consistency_sweep(get_dgp("ma0"), BARTLETT, setting, [100, 500], 40, 15, n=30)
    assert table[1][1].median < table[0][1].median


def test_sweep_single_rep_and_order():
    table = mc.consistency_sweep(get_dgp("far1"), BARTLETT, 2, [30, 60], 1, 0, n=8)
    assert [T for T, _ in table] == [30, 60]
    assert all(len(s.losses) == 1 for _, s in table)
    with pytest.raises(ValueError):
        mc.consistency_sweep(get_dgp("far1"), BARTLETT, 2, [60, 30], 1, 0, n=8)


def test_reference_surface_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FLRCOV_CACHE_DIR", str(tmp_path / "refs"))
    spec, grid = get_dgp("far-psi1"), Grid(8)
    a = mc.reference_surface(spec, grid, J=100, T_inner=100, seed=4)
    files = os.listdir(tmp_path / "refs")
    assert files == ["ref_far-psi1_n8_J100_T100_s4.csv"]
    b = mc.reference_surface(spec, grid, J=100, T_inner=100, seed=4)
    assert np.array_equal(a, b)
    # scalar processes never touch the cache
    mc.reference_surface(get_dgp("far1"), grid, J=100, T_inner=100, seed=4)
    assert len(os.listdir(tmp_path / "refs")) == 1


def test_loss_csv_and_summary_roundtrip(tmp_path):
    far = get_dgp("far1")
    cell = mc.ExperimentCell(far, BARTLETT, 4, 40, n=10, reps=3, seed=1)
    s = mc.run_cell(cell, true_lrcov(far, cell.grid))
    rows = mc.read_losses_csv(mc.write_losses_csv(tmp_path / "l.csv", [(cell, s)]))
    assert [r["rep"] for r in rows] == [0, 1, 2]
    assert [r["loss"] for r in rows] == list(s.losses)
    assert [r["h_used"] for r in rows] == list(s.bandwidths)
    assert rows[0]["dgp"] == "far1" and rows[0]["kernel"] == "bartlett"
    d = mc.read_summary_json(mc.write_summary_json(tmp_path / "s.json", cell, s))
    assert d["median"] == s.median and d["reps"] == 3 and d["setting"] == 4
