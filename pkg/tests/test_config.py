import pytest

from qtstar.config import ConfigError, digest_of, load_config, parse_config
from qtstar.core import PLANCK_H, max_decoherence_time

from conftest import CONFIGS


def test_shipped_sg_config():
    rc = load_config(CONFIGS / "stern_gerlach.toml")
    assert rc.galilean.hbar == PLANCK_H
    assert rc.delta_t_over_tau == 100.0
    assert rc.stern_gerlach.m2 == 1.79e-17
    dt, note = rc.delta_t_for(rc.stern_gerlach.m2)
    assert dt == pytest.approx(100 * max_decoherence_time(rc.galilean, 1.79e-17))
    assert "tau" in note
    assert rc.section("params")["masses_kg"] == [1.79e-25, 1.79e-17]


def test_desk_config():
    rc = load_config(CONFIGS / "desk.toml")
    assert rc.mass == 1.0 and rc.galilean.beta == 0.25
    assert rc.section("collision")["v"] == 64.0
    assert rc.delta_t_for(1.0) == (1.0, "defaulted to tau")


def test_suffixed_and_bare_spellings_agree():
    a = parse_config("hbar_J_s = 1.0\nalpha_m2_per_s = 2.0\nbeta_m2_per_s3 = 3.0\n")
    b = parse_config("hbar = 1.0\nalpha = 2.0\nbeta = 3.0\n")
    assert a.galilean == b.galilean


@pytest.mark.parametrize("text, match", [
    ("alpha = 1.0\nalpha_m2_per_s = 1.0\n", "more than once"),
    ("gamma = 1.0\n", "unknown key"),
    ("beta = 0.0\n", "beta"),
    ("alpha = 'x'\n", "number"),
    ("delta_t = 1.0\ndelta_t_over_tau = 1.0\n", "not both"),
    ("mass = -1.0\n", "mass"),
    ("[nonsense]\nx = 1\n", "unknown section"),
    ("[stern_gerlach]\nm1_kg = 2.0\nm2_kg = 1.0\n", "heavier"),
    ("[stern_gerlach]\nd2_m = 1.0\n", "unknown key"),
    ("alpha = \n", "line 1"),
])
def test_validation_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")


def test_digest_is_stable():
    text = (CONFIGS / "desk.toml").read_text()
    assert parse_config(text).digest == parse_config(text).digest
    assert digest_of({"a": 1, "b": 2}) == digest_of({"b": 2, "a": 1})
    assert parse_config(text).digest != parse_config(text.replace("beta = 0.25", "beta = 0.5")).digest
