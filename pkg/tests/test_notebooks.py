import runpy
from pathlib import Path

NOTEBOOKS = Path(__file__).parent.parent / "notebooks"


def test_tour_runs(capsys):
    runpy.run_path(str(NOTEBOOKS / "tour.py"), run_name="__main__")
    out = capsys.readouterr().out
    assert "norm of T^(3/2) + T^2 = 2^-(3/2)" in out
    assert "torsion-free part [['T^4'], ['T^5']]" in out
