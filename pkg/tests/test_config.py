"""Strict TOML configuration: parsing, validation, round-trip emission."""

import pytest
from hypothesis import given, strategies as st

from sgnfem.config import (
    BenchSettings,
    Config,
    ConvergeSettings,
    CustomScenarioConfig,
    RunSettings,
    VALID_FAMILIES,
    emit_config,
    load_config,
    parse_config,
)
from sgnfem.errors import BadInput


def test_empty_config_has_no_sections():
    cfg = parse_config("")
    assert cfg.run is None and cfg.converge is None and cfg.bench is None


def test_section_defaults():
    cfg = parse_config("[run]\n")
    assert cfg.run == RunSettings()
    cfg = parse_config("[converge]\n")
    assert cfg.converge == ConvergeSettings()


def test_unknown_key_is_named():
    with pytest.raises(BadInput, match=r"familly_h.*\[run\]"):
        parse_config('[run]\nfamilly_h = "P1"\n')
    with pytest.raises(BadInput, match=r"treads.*\[bench\]"):
        parse_config("[bench]\ntreads = 4\n")
    with pytest.raises(BadInput, match=r"xo.*\[run.custom\]"):
        parse_config("[run.custom]\nxo = -50.0\n")


def test_unknown_section_rejected():
    with pytest.raises(BadInput, match=r"\[sweep\]"):
        parse_config("[sweep]\nn = 3\n")


def test_bare_top_level_value_rejected():
    with pytest.raises(BadInput):
        parse_config("run = 3\n")


def test_invalid_toml_reported():
    with pytest.raises(BadInput, match="not valid TOML"):
        parse_config("[run\n")


def test_family_and_rule_validation():
    with pytest.raises(BadInput, match="P7"):
        parse_config('[run]\nfamily_h = "P7"\n')
    with pytest.raises(BadInput, match="dt_rule"):
        parse_config('[converge]\ndt_rule = "dx4"\n')
    with pytest.raises(BadInput, match="bottom_coupling"):
        parse_config('[run]\nbottom_coupling = "weak"\n')
    with pytest.raises(BadInput, match="n_values"):
        parse_config("[converge]\nn_values = []\n")


def test_load_config_missing_file(tmp_path):
    with pytest.raises(BadInput, match="cannot read"):
        load_config(tmp_path / "none.toml")


def test_load_config_reads_file(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text('[run]\nscenario = "wall_reflection"\namplitude = 0.1\n')
    cfg = load_config(p)
    assert cfg.run.scenario == "wall_reflection"
    assert cfg.run.amplitude == 0.1


def test_custom_section_parses_nested():
    cfg = parse_config(
        "[run]\n"
        'scenario = "custom"\n'
        "[run.custom]\n"
        "domain = [-40.0, 0.0]\n"
        "amplitude = 0.12\n"
        "gauges = [0.0, -5.0]\n"
    )
    assert cfg.run.custom == CustomScenarioConfig(
        domain=[-40.0, 0.0], amplitude=0.12, gauges=[0.0, -5.0]
    )


_safe_str = st.text(
    alphabet=st.characters(min_codepoint=32, max_codepoint=126), max_size=12
)
_finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
_pos = st.floats(1e-6, 1e3, allow_nan=False)


_run_settings = st.builds(
    RunSettings,
    scenario=st.sampled_from(["energy_conservation", "shoal_35", "custom"]),
    amplitude=st.none() | _pos,
    family_h=st.sampled_from(("",) + VALID_FAMILIES),
    dx=st.none() | _pos,
    dt=st.none() | _pos,
    gauges=st.none() | st.lists(_finite, max_size=4),
    lumping=st.booleans(),
    bottom_coupling=st.sampled_from(["strong", "half"]),
    out_dir=_safe_str,
    custom=st.none() | st.builds(CustomScenarioConfig, amplitude=_pos, x0=_finite),
)

_converge_settings = st.builds(
    ConvergeSettings,
    family_h=st.sampled_from(VALID_FAMILIES),
    family_u=st.sampled_from(VALID_FAMILIES),
    n_values=st.lists(st.integers(2, 5000), min_size=1, max_size=6),
    norms=st.lists(st.sampled_from(["L2", "H1", "H2", "Linf"]), min_size=1, max_size=4),
    dt_rule=st.sampled_from(["dx8", "dx2", "fixed"]),
    dt=st.none() | _pos,
    threads=st.integers(1, 16),
)

_bench_settings = st.builds(
    BenchSettings,
    name=st.sampled_from(["wall", "revere", "runup-sweep"]),
    amplitudes=st.lists(_pos, max_size=5),
    collision_check=st.booleans(),
)


@given(
    run=st.none() | _run_settings,
    converge=st.none() | _converge_settings,
    bench=st.none() | _bench_settings,
)
def test_round_trip(run, converge, bench):
    cfg = Config(run=run, converge=converge, bench=bench)
    text = emit_config(cfg)
    assert parse_config(text) == cfg


def test_emitted_text_is_plain_toml():
    text = emit_config(Config(run=RunSettings(dt=0.25, gauges=[0.0, -5.0])))
    assert "[run]" in text
    assert "dt = 0.25" in text
    assert "gauges = [0.0, -5.0]" in text
