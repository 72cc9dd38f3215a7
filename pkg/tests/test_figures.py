"""Tests for figure-data emission and the worked guessing example."""

import csv
import math

import pytest

from renyibounds import (
    DomainError,
    FigureRequest,
    Pmf,
    emit_figure,
    example_source,
    max_entropy_gap,
    max_entropy_gap_limit,
    run_example1,
)


def read_rows(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def test_figure_request_validation():
    FigureRequest("4L", "out.csv")
    with pytest.raises(DomainError):
        FigureRequest("5", "out.csv")
    with pytest.raises(DomainError):
        FigureRequest("4l", "out.csv")
    with pytest.raises(DomainError):
        FigureRequest("1", "out.csv", resolution=1)


def test_figure1_reference_rows(tmp_path):
    out = tmp_path / "fig1.csv"
    emit_figure(FigureRequest("1", str(out), resolution=12))
    header, rows = read_rows(str(out))
    assert header == ["rho", "alpha", "c_inf"]
    cells = {(r[0], r[1]): float(r[2]) for r in rows}
    # The injected (rho=2, alpha=1) reference cell carries the canonical
    # order-one penalty value.
    assert cells[("2", "1")] == pytest.approx(0.0860713320559342, abs=1e-12)
    # At alpha=inf the asymptotic gap is exactly log2 rho.
    for (rho_txt, alpha_txt), value in cells.items():
        if alpha_txt == "inf":
            assert value == pytest.approx(
                math.log2(float(rho_txt)), abs=1e-9
            )
        assert value >= -1e-12
    alphas = {r[1] for r in rows}
    assert alphas == {"0.25", "0.5", "1", "2", "4", "inf"}


def test_figure2_limits_dominate(tmp_path):
    out = tmp_path / "fig2.csv"
    emit_figure(FigureRequest("2", str(out), resolution=8))
    header, rows = read_rows(str(out))
    assert header == ["alpha", "n", "c", "rho"]
    # For each (alpha, rho) the finite-n gaps increase with n toward the
    # asymptotic value.
    by_key = {}
    for alpha_txt, n_txt, c_txt, rho_txt in rows:
        by_key.setdefault((alpha_txt, rho_txt), {})[n_txt] = float(c_txt)
    for (alpha_txt, rho_txt), series in by_key.items():
        limit = series["inf"]
        ordered = [series[str(n)] for n in (2, 4, 8, 16, 32, 64)]
        for small, large in zip(ordered, ordered[1:]):
            assert small <= large + 1e-9
        assert ordered[-1] <= limit + 1e-9


def test_figure3_finite_below_limit(tmp_path):
    out = tmp_path / "fig3.csv"
    emit_figure(FigureRequest("3", str(out), resolution=8))
    header, rows = read_rows(str(out))
    assert header == ["rho", "n", "c_n", "c_inf"]
    for rho_txt, n_txt, c_n_txt, c_inf_txt in rows:
        c_n, c_inf = float(c_n_txt), float(c_inf_txt)
        assert c_n <= c_inf + 1e-9
        assert c_inf == pytest.approx(
            max_entropy_gap_limit(float(rho_txt), 1.0), abs=1e-10
        )
    ns = {r[1] for r in rows}
    assert ns == {"8", "32", "128", "512"}


def test_figure4_structure(tmp_path):
    for fig_id in ("4L", "4R"):
        out = tmp_path / f"fig{fig_id}.csv"
        emit_figure(FigureRequest(fig_id, str(out), resolution=10))
        header, rows = read_rows(str(out))
        assert header == ["rho_g", "k", "lower_bits", "upper_bits"]
        ks = {r[1] for r in rows}
        assert ks == {"100", "1000"}
        for rho_txt, k_txt, lo_txt, hi_txt in rows:
            assert float(lo_txt) <= float(hi_txt)
            assert 0.0 < float(rho_txt) <= 10.0


def test_example_source_is_truncated_geometric():
    p = example_source()
    assert p.n == 128
    assert p.is_sorted
    ratio = p.masses[0] / p.masses[1]
    assert ratio == pytest.approx(25.0 / 24.0, rel=1e-12)
    assert math.fsum(p.masses) == pytest.approx(1.0, abs=1e-12)


def test_run_example1_report():
    report = run_example1(resolution=10, verbose=False)
    grid = report["rho_g"]
    assert grid == [10.0 * j / 10 for j in range(1, 11)]
    for key in ("k100", "k1000"):
        block = report[key]
        assert set(block) == {"lower", "upper", "gap"}
        assert len(block["gap"]) == len(grid)
        for lo, hi, gap in zip(block["lower"], block["upper"], block["gap"]):
            assert gap == pytest.approx(hi - lo, abs=1e-12)
            assert gap >= 0.0
    assert report["max_gap_k100"] == pytest.approx(
        max(report["k100"]["gap"]), abs=1e-15
    )
    assert report["max_gap_k1000"] == pytest.approx(
        max(report["k1000"]["gap"]), abs=1e-15
    )
    # Larger blocks tighten the bracket at every grid point.
    for g100, g1000 in zip(report["k100"]["gap"], report["k1000"]["gap"]):
        assert g1000 < g100
    # The bracket gap shrinks toward the small end of the grid; at
    # rho_g=1 and k=1000 it is the halved penalty plus ~0.024 of log
    # corrections.
    assert report["k1000"]["gap"][0] < report["k1000"]["gap"][-1]
    assert report["k1000"]["gap"][0] == pytest.approx(0.0671, abs=5e-3)


def test_run_example1_verbose_prints(capsys):
    run_example1(resolution=4, verbose=True)
    out = capsys.readouterr().out
    assert "max gap at k=1000:" in out
    assert "max gap at k=100:" in out


def test_threads_do_not_change_output(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    emit_figure(FigureRequest("1", str(a), resolution=7), threads=1)
    emit_figure(FigureRequest("1", str(b), resolution=7), threads=4)
    assert a.read_bytes() == b.read_bytes()
