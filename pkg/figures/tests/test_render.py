import csv

import numpy as np
import pytest
from matplotlib.image import imread

from ugafigs import FigureSpec, render


def write_aggregate(path, generations, steps=4, clamped=False):
    """Aggregate CSV matching the documented experiment-runner schema."""
    header = ["generation", "mean_avg_fitness", "se_avg_fitness",
              "mean_best_fitness", "se_best_fitness"]
    for i in range(1, steps + 1):
        header += [f"step{i}_freq_mean", f"step{i}_freq_se"]
    header.append("clamped_loci_mean")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for g in range(generations):
            row = [g, repr(0.01 * g), repr(0.002), repr(0.02 * g), repr(0.003)]
            for i in range(1, steps + 1):
                row += [repr(min(1.0, g / max(generations - 1, 1))), repr(0.01)]
            row.append(repr(float(10 * g) if clamped else 0.0))
            w.writerow(row)
    return str(path)


def test_fig1_panel_and_series_counts(tmp_path):
    agg = write_aggregate(tmp_path / "a.csv", generations=100, steps=4)
    out = tmp_path / "fig1.png"
    result = render(FigureSpec((agg,), "fig1", str(out), cadence=20))
    assert result.panels == 5                      # fitness + 4 frequencies
    assert result.series_per_panel == (1, 1, 1, 1, 1)
    assert result.error_bars_per_series == 5      # 100 generations / cadence 20
    assert out.exists()


def test_cadence_arithmetic(tmp_path):
    agg = write_aggregate(tmp_path / "a.csv", generations=5000, steps=1)
    result = render(FigureSpec((agg,), "fig1", str(tmp_path / "o.png"), cadence=200))
    assert result.error_bars_per_series == 25


def test_rerender_is_stable(tmp_path):
    agg = write_aggregate(tmp_path / "a.csv", generations=50, steps=2)
    r1 = render(FigureSpec((agg,), "fig1", str(tmp_path / "one.png"), cadence=10))
    r2 = render(FigureSpec((agg,), "fig1", str(tmp_path / "two.png"), cadence=10))
    assert r1.pixel_size == r2.pixel_size
    assert r1.series_per_panel == r2.series_per_panel


def test_fig2_and_fig3_comparison_layouts(tmp_path):
    clamped = write_aggregate(tmp_path / "c.csv", generations=60, clamped=True)
    plain = write_aggregate(tmp_path / "p.csv", generations=60)
    for layout in ("fig2", "fig3"):
        out = tmp_path / f"{layout}.png"
        result = render(FigureSpec((clamped, plain), layout, str(out), cadence=12))
        assert result.panels == 2                  # fitness comparison + loci count
        assert result.series_per_panel == (2, 1)
        assert result.error_bars_per_series == 5
        assert out.exists()


def test_refractal_full_range_normalization(tmp_path):
    grid = np.linspace(-2.0, 7.0, 64).reshape(8, 8)
    src = tmp_path / "g.csv"
    with open(src, "w") as fh:
        for row in grid:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    out = tmp_path / "g.png"
    result = render(FigureSpec((str(src),), "refractal", str(out), cadence=1))
    assert result.pixel_size == (8, 8)
    img = imread(out)
    greys = img[:, :, 0]
    assert greys.min() == pytest.approx(0.0, abs=1 / 255)   # full shade range used
    assert greys.max() == pytest.approx(1.0, abs=1 / 255)
    # lighter shades mean greater values
    assert greys[np.unravel_index(np.argmax(grid), grid.shape)] > 0.99


def test_refractal_constant_matrix_uniform_image(tmp_path):
    src = tmp_path / "c.csv"
    with open(src, "w") as fh:
        for _ in range(4):
            fh.write(",".join(["2.5"] * 4) + "\n")
    out = tmp_path / "c.png"
    render(FigureSpec((str(src),), "refractal", str(out), cadence=1))
    img = imread(out)
    assert np.all(img[:, :, 0] == img[0, 0, 0])


def test_spec_validation(tmp_path):
    agg = write_aggregate(tmp_path / "a.csv", generations=10)
    with pytest.raises(ValueError):
        FigureSpec((agg,), "fig9", "o.png")
    with pytest.raises(ValueError):
        FigureSpec((agg,), "fig1", "o.png", cadence=0)
    with pytest.raises(ValueError):
        FigureSpec((agg,), "fig2", "o.png")   # comparison layouts need two inputs


def test_missing_columns_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    with open(bad, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["generation", "mean_avg_fitness"])
        w.writerow([0, "1.0"])
    with pytest.raises(ValueError, match="missing columns"):
        render(FigureSpec((str(bad),), "fig1", str(tmp_path / "o.png")))


def test_cli(tmp_path, capsys):
    from ugafigs.cli import main

    agg = write_aggregate(tmp_path / "a.csv", generations=30, steps=1)
    out = tmp_path / "cli.png"
    assert main(["fig1", agg, "--out", str(out), "--cadence", "10"]) == 0
    assert out.exists()
    assert "2 panel(s)" in capsys.readouterr().out
