import numpy as np
import pytest

from gshermite import DataError, HermiteRep, ShapeError
from gshermite.io import read_coeffs, sidecar_path, write_coeffs


def test_round_trip_exact(tmp_path, rng):
    rep = HermiteRep(rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3)), "operator-output", 1e-3)
    path = tmp_path / "c.csv"
    write_coeffs(rep, path)
    back = read_coeffs(path)
    assert np.array_equal(back.coeffs, rep.coeffs)
    assert back.provenance == "operator-output" and back.truncation_loss == 1e-3
    assert path.read_text().splitlines()[0] == "n1,n2,re,im"


def test_without_sidecar(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("n1,re,im\n0,1.0,0.0\n3,2.0,-1.0\n")
    rep = read_coeffs(path)
    assert rep.shape == (4,) and rep.coeffs[3] == 2 - 1j


def test_nan_rejected(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("n1,re,im\n0,1.0,0.0\n1,nan,0.0\n")
    with pytest.raises(DataError, match=r"\(1,\)"):
        read_coeffs(path)


def test_bad_header(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ShapeError):
        read_coeffs(path)


def test_sidecar_name(tmp_path):
    assert sidecar_path(tmp_path / "x.csv").name == "x.csv.json"
