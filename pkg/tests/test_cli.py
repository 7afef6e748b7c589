import numpy as np
import pytest

from windext.catalog import make_case
from windext.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, EXIT_WITNESS, SEED_ENV, run
from windext.spectral import load_samples, save_samples


def out_of(capsys, argv):
    code = run(argv)
    return code, capsys.readouterr().out.splitlines()


def test_winding_catalog(capsys):
    code, lines = out_of(capsys, ["winding", "--catalog", "monomial", "--param", "n=5"])
    assert code == EXIT_OK and "winding=5" in lines


def test_extend_from_csv(tmp_path, capsys):
    path = tmp_path / "f.csv"
    save_samples(make_case("pole_counterexample").f, path)
    code, lines = out_of(capsys, ["extend", "--in", str(path), "--budget", "1"])
    assert code == EXIT_OK and "verdict=meromorphic" in lines and "pole_count=1" in lines


def test_reproduce_counterexample(capsys):
    code, lines = out_of(capsys, ["reproduce", "counterexample", "--probes", "500"])
    assert code == EXIT_OK
    assert "winding=0" in lines and "pole_count=1" in lines
    assert any(line.startswith("pole[0]=0.5") for line in lines)
    assert "witness.found=false" in lines


@pytest.mark.parametrize("scenario", ["zero-free", "shift", "newton-roundtrip"])
def test_reproduce_other_scenarios(capsys, scenario):
    code, lines = out_of(capsys, ["reproduce", scenario, "--probes", "300"])
    assert code == EXIT_OK and lines


def test_witness_exit_codes(capsys):
    code, lines = out_of(capsys, ["witness", "--catalog", "conj_z", "--probes", "500"])
    assert code == EXIT_WITNESS and "found=true" in lines
    code, lines = out_of(capsys, ["witness", "--catalog", "monomial", "--param", "n=2", "--probes", "200"])
    assert code == EXIT_OK and "found=false" in lines


def test_witness_is_deterministic(capsys, monkeypatch):
    argv = ["witness", "--catalog", "conj_z", "--probes", "200", "--seed", "3"]
    assert out_of(capsys, argv) == out_of(capsys, argv)
    monkeypatch.setenv(SEED_ENV, "3")
    assert out_of(capsys, argv[:-2]) == out_of(capsys, argv)


def test_certify_and_classify(capsys):
    code, lines = out_of(capsys, ["certify", "--catalog", "rational", "--param", "num=[-1,1]",
                                  "--param", "den=[-0.5,1]", "--nodes", "1:1", "--budget", "1"])
    assert code == EXIT_OK and "status=certified" in lines and "pole_count=1" in lines
    code, lines = out_of(capsys, ["classify", "--catalog", "pole_counterexample", "--pi", "0:1:in"])
    assert code == EXIT_OK and "status=certified" in lines


def test_certify_inconclusive_exit(capsys):
    code, lines = out_of(capsys, ["certify", "--catalog", "boundary_zero_times", "--param", "base=conj_z",
                                  "--nodes", "1:1"])
    assert code != EXIT_OK and "status=inconclusive" in lines


def test_catalog_emit_round_trip(tmp_path, capsys):
    path = tmp_path / "c.csv"
    code, _ = out_of(capsys, ["catalog", "emit", "blaschke", "--param", "zeros=[0.5]", "--out", str(path)])
    assert code == EXIT_OK
    assert np.allclose(load_samples(path).values, make_case("blaschke", {"zeros": [0.5]}).f.values)


def test_decompose_and_factorize(capsys):
    code, lines = out_of(capsys, ["decompose", "--catalog", "monomial", "--param", "n=2", "--nodes", "1:2"])
    assert code == EXIT_OK and any(line.startswith("residual=") for line in lines)
    code, lines = out_of(capsys, ["factorize", "--catalog", "nonvanishing_winding", "--param", "N=-2"])
    assert code == EXIT_OK and "N=-2" in lines


@pytest.mark.parametrize(
    "argv, code",
    [
        (["bogus"], EXIT_USAGE),
        (["winding"], EXIT_USAGE),
        (["winding", "--catalog", "nope"], EXIT_USAGE),
        (["winding", "--catalog", "conj_z", "--grid-n", "100"], EXIT_USAGE),
        (["winding", "--in", "/nonexistent.csv"], EXIT_DATA),
        (["winding", "--catalog", "boundary_zero_times"], EXIT_DATA),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    assert run(argv) == code
