from qgatemem.plots import save_convergence_plot, save_curve_plot
from qgatemem.vqe import CurveRow

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_convergence_plot_writes_png(tmp_path):
    path = tmp_path / "trace.png"
    save_convergence_plot([3.0, 2.0, 1.5, 1.5], str(path), exact_energy=1.4)
    data = path.read_bytes()
    assert data.startswith(PNG_MAGIC)
    assert not (tmp_path / "trace.png.tmp").exists()


def test_convergence_plot_without_reference_line(tmp_path):
    path = tmp_path / "trace.png"
    save_convergence_plot([1.0], str(path))
    assert path.read_bytes().startswith(PNG_MAGIC)


def test_curve_plot_writes_png(tmp_path):
    rows = [
        CurveRow(0.5, -1.1, -1.11, 40, True),
        CurveRow(1.0, -0.9, -0.92, 35, True),
    ]
    path = tmp_path / "curve.png"
    save_curve_plot(rows, str(path))
    assert path.read_bytes().startswith(PNG_MAGIC)


def test_renders_are_byte_deterministic(tmp_path):
    trace = [2.0 - 0.01 * i for i in range(50)]
    first = tmp_path / "a.png"
    second = tmp_path / "b.png"
    save_convergence_plot(trace, str(first), exact_energy=1.0)
    save_convergence_plot(trace, str(second), exact_energy=1.0)
    assert first.read_bytes() == second.read_bytes()
