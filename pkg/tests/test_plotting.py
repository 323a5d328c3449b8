import numpy as np

from qcorr.plotting import line_plot, plot_csv, read_csv_columns


def test_svg_shape_and_series(tmp_path):
    out = tmp_path / "a.svg"
    x = np.linspace(0, 1, 11)
    line_plot(x, {"TE": x, "TG": np.sqrt(x)}, out)
    text = out.read_text()
    assert 'viewBox="0 0 800 600"' in text
    assert 'id="series-TE"' in text and 'id="series-TG"' in text
    # Self-contained: no linked images, fonts or stylesheets.
    assert 'href="http' not in text and "<image" not in text and "@import" not in text


def test_deterministic(tmp_path):
    x = np.linspace(-1, 1, 5)
    line_plot(x, {"y": x**2}, tmp_path / "a.svg")
    line_plot(x, {"y": x**2}, tmp_path / "b.svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_nan_cells_and_single_point(tmp_path):
    csv = tmp_path / "one.csv"
    csv.write_text("x,a,b\n0.5,1.0,\n")
    plot_csv(csv, "x", ["a", "b"], tmp_path / "one.svg")
    text = (tmp_path / "one.svg").read_text()
    assert 'id="series-a"' in text and 'id="series-b"' not in text


def test_read_csv_columns(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x,flag,y\n1,true,2.5\n2,false,\n")
    data = read_csv_columns(csv)
    assert data["x"].tolist() == [1.0, 2.0]
    assert np.isnan(data["y"][1])
