import os

import pytest

from utils.config import (
    DEFAULT_CAPS,
    INEQUALITY_TAGS,
    Caps,
    ConfigError,
    SweepConfig,
    load_sweep_config,
    parse_sweep_config,
)


def test_sample_config(samples_dir):
    config = load_sweep_config(os.path.join(samples_dir, "sweep.cfg"))
    assert config.family == "all_connected"
    assert config.family_arg == "5"
    assert config.output_format == "csv"
    assert config.inequalities == INEQUALITY_TAGS
    assert config.caps.max_split_edges == 7
    assert config.workers == 1


def test_defaults():
    config = parse_sweep_config("")
    assert config == SweepConfig()
    assert config.caps == DEFAULT_CAPS
    assert DEFAULT_CAPS.max_betti_vertices == 16
    assert DEFAULT_CAPS.max_cg_vertices == 8


def test_plain_family_and_flags():
    config = parse_sweep_config("family = file\nfamily_arg = graphs/\nskip_capped = yes\nmax_cg_vertices = 6\n")
    assert config.family == "file" and config.family_arg == "graphs/"
    assert config.skip_capped is True
    assert config.caps == Caps(max_cg_vertices=6)


@pytest.mark.parametrize("text", [
    "colour = blue",
    "family = trees(4)",
    "family = paths(x)",
    "family = paths(0)",
    "splitting_filter = none",
    "output_format = parquet",
    "inequalities = pd, area",
    "max_split_edges = many",
    "skip_capped = perhaps",
    "workers = 0",
    "workers = two",
    "field = gf4",
    "max_betti_vertices = 0",
])
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_sweep_config(text)


def test_config_hash_ignores_where_output_goes():
    base = SweepConfig(family="paths", family_arg="5")
    assert base.config_hash() == base.with_overrides(output_path="elsewhere", workers=4).config_hash()
    assert base.config_hash() != base.with_overrides(field="q").config_hash()
    assert base.config_hash() != base.with_overrides(max_split_edges=5).config_hash()
    assert len(base.config_hash()) == 64


def test_overrides_skip_none_and_reach_caps():
    base = SweepConfig()
    assert base.with_overrides(field=None, max_betti_vertices=None) == base
    changed = base.with_overrides(max_betti_vertices=10, splitting_filter="special1")
    assert changed.caps.max_betti_vertices == 10
    assert changed.caps.max_split_edges == DEFAULT_CAPS.max_split_edges
    assert changed.splitting_filter == "special1"
    with pytest.raises(ConfigError):
        base.with_overrides(family="trees")


def test_to_dict_is_json_ready():
    data = SweepConfig().to_dict()
    assert data["inequalities"] == list(INEQUALITY_TAGS)
    assert data["caps"]["max_split_edges"] == DEFAULT_CAPS.max_split_edges


def test_field_is_stored_by_its_canonical_label():
    upper = SweepConfig(field="GF2")
    assert upper.field == "gf2"
    assert upper.config_hash() == SweepConfig(field="gf2").config_hash()
    assert SweepConfig(field="gfp:2").field == "gf2"
    assert SweepConfig(field="Rationals").field == "q"
    assert parse_sweep_config("field = QQ").field == "q"
