import math

import pytest

import mflab

ZOO = dict(mflab.zoo())
QUARTER = ZOO["bernoulli_quarter"]


def test_version():
    assert mflab.__version__.count(".") == 2


def test_tau_anchors():
    for spec in ZOO.values():
        assert mflab.tau(spec, 1.0, "natural" if "self_similar" in spec else "ell") == 0.0
    assert mflab.tau(QUARTER, 2.0) == pytest.approx(math.log2(1 / 16 + 9 / 16), abs=1e-14)


def test_dimension_and_sigma2():
    d = mflab.dimension(QUARTER)
    assert d["d"] == pytest.approx(0.8112781244591329, abs=1e-12)
    assert abs(d["d"] - d["d_numeric"]) < 1e-8
    assert mflab.sigma2(QUARTER, "2") == pytest.approx(0.4710198991297989, abs=1e-12)


def test_exact_distribution_small():
    atoms = mflab.exact_distribution(QUARTER, 2)
    values = [v for v, _ in atoms]
    probs = [p for _, p in atoms]
    assert values == pytest.approx([2 * math.log2(4 / 3), 2 + math.log2(4 / 3), 4.0], abs=1e-12)
    assert probs == pytest.approx([9 / 16, 6 / 16, 1 / 16], abs=1e-15)


def test_classify_zoo():
    expected = {
        "bernoulli_half": "equivalent_to_Hdelta",
        "bernoulli_quarter": "singular_Hd_ac_Pd",
        "cantor_natural": "equivalent_to_Hdelta",
        "cantor_biased": "singular_Hd_ac_Pd",
        "markov_two_state": "singular_Hd_ac_Pd",
    }
    for name, case in expected.items():
        assert mflab.classify(ZOO[name])["case"] == case


def test_qb_constant_markov():
    assert mflab.qb_constant(ZOO["markov_two_state"]) == pytest.approx(3.0, rel=1e-12)


def test_validation_error_is_typed():
    with pytest.raises(mflab.ValidationError, match="sum to 1"):
        mflab.tau("family: multinomial\nell: 2\nweights: [0.5, 0.4]\n", 1.0)


def test_sample_path_deterministic():
    assert mflab.sample_path(QUARTER, 64, seed=5, path=3) == mflab.sample_path(QUARTER, 64, seed=5, path=3)


def test_cli_roundtrip(tmp_path):
    model = tmp_path / "m.model"
    model.write_text(QUARTER)
    code, out, err = mflab.run_cli(["spectrum", "--model", str(model), "--out", str(tmp_path / "o")])
    assert code == 0, err
    assert (tmp_path / "o" / "spectrum.csv").exists()
    code, out, err = mflab.run_cli(["replay", str(tmp_path / "o" / "manifest.json")])
    assert code == 0, err
    assert "DIFFERS" not in out


def test_cli_validation_exit_code(tmp_path):
    model = tmp_path / "bad.model"
    model.write_text("family: multinomial\nell: 2\nweights: [0.5, 0.4]\n")
    code, _, err = mflab.run_cli(["spectrum", "--model", str(model), "--out", str(tmp_path)])
    assert code == 2
    assert "sum to 1" in err
