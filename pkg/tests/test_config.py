import pytest

from patchbpf.config import ConfigError, load_config, parse_config_text, parse_pairs, preset_text


def test_parse_basic():
    vals = parse_config_text("radius = 16e-3  # mm\nn-points=11\nmeta.ws = 1e-3\nmeta.note = hi\n")
    assert vals["radius"] == 0.016 and vals["n_points"] == 11
    assert vals["metadata"] == {"ws": 1e-3, "note": "hi"}


def test_parse_lists():
    vals = parse_config_text("tz = 4.1e9, 4.5e9\ncm_resonances = 4.7e9:10, 7.4e9:12\n")
    assert vals["tz"] == (4.1e9, 4.5e9)
    assert vals["cm_resonances"] == ((4.7e9, 10.0), (7.4e9, 12.0))
    assert parse_pairs("1:2,") == ((1.0, 2.0),)


@pytest.mark.parametrize("text", ["bogus = 1", "radius 1", "n_points = x", "bands = 1e9"])
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_layering(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("fbw = 0.2\nmeta.ws = 2e-3\n")
    cfg = load_config("single", str(path), {"f_target": 2.5e9, "radius": None})
    assert cfg.fbw == 0.2 and cfg.f_target == 2.5e9 and cfg.radius == 16e-3
    assert cfg.metadata["ws"] == 2e-3 and cfg.metadata["ls"] == 11.6e-3


def test_presets_parse():
    for name in ("single", "dual"):
        assert parse_config_text(preset_text(name))
    with pytest.raises(ConfigError):
        preset_text("triple")
    with pytest.raises(ConfigError):
        load_config(None, "/nonexistent.cfg")


def test_resonator():
    assert load_config(overrides={"radius": 0.016, "eps_eff": 3.0}).resonator().eps_eff == 3.0
    fitted = load_config(overrides={"radius": 0.016, "fit_freq": 2.77e9}).resonator()
    assert fitted.eps_eff == pytest.approx(3.92895, abs=1e-5)
    with pytest.raises(ConfigError):
        load_config(overrides={"radius": 0.016}).resonator()
    with pytest.raises(ConfigError):
        load_config().resonator()
