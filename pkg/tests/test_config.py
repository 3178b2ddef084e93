import pytest

from sitrep.config import (
    LIVE_TUNABLE,
    ConfigError,
    RunConfig,
    UnknownConfigKey,
    load_config,
    set_config_value,
)


class TestLoading:
    def test_no_source_means_defaults(self):
        cfg = load_config(None)
        assert cfg.atn.theta1 == 1.0
        assert cfg.scales.spatial is None
        assert cfg.proximity.kernel == "linear"
        assert cfg.characterisation.theta == 0.4
        assert cfg.engine.tick_ms == 0

    def test_partial_document_overrides_only_what_it_names(self):
        cfg = load_config('{"atn": {"theta1": 0.5}, "scales": {"spatial": 500}}')
        assert cfg.atn.theta1 == 0.5
        assert cfg.atn.theta2 == 3.0
        assert cfg.scales.spatial == 500
        assert cfg.scales.temporal is None

    def test_hyphenated_keys_are_accepted(self):
        cfg = load_config('{"engine": {"tick-ms": 20, "snapshot-log": "out.jsonl"}}')
        assert cfg.engine.tick_ms == 20
        assert cfg.engine.snapshot_log == "out.jsonl"

    def test_loads_from_a_file(self, tmp_path):
        p = tmp_path / "run.json"
        p.write_text('{"proximity": {"kernel": "exponential"}}')
        assert load_config(p).proximity.kernel == "exponential"

    def test_unknown_section_is_rejected(self):
        with pytest.raises(UnknownConfigKey):
            load_config('{"physics": {"gravity": 10}}')

    def test_unknown_key_is_rejected(self):
        with pytest.raises(UnknownConfigKey):
            load_config('{"atn": {"theta9": 1}}')

    @pytest.mark.parametrize("text", [
        '{"atn": {"theta1": 5, "theta2": 3}}',          # thresholds out of order
        '{"proximity": {"kernel": "gaussian"}}',
        '{"engine": {"tick_ms": -5}}',
        '{"scales": {"spatial": 0}}',
        '{"characterisation": {"every": 0}}',
        '{"atn": [1, 2]}',                              # section must be an object
        '[1, 2]\n',                                     # document must be an object
    ])
    def test_bad_documents_are_config_errors(self, text):
        with pytest.raises(ConfigError):
            load_config(text)


class TestLiveTuning:
    @pytest.mark.parametrize("key,value", [
        ("scales.spatial", 750), ("scales.temporal", 4), ("characterisation.theta", 0.25),
    ])
    def test_whitelisted_keys_apply(self, key, value):
        cfg = RunConfig()
        set_config_value(cfg, key, value)
        section, attr = key.split(".")
        assert getattr(getattr(cfg, section), attr) == float(value)

    def test_the_whitelist_is_exactly_three_keys(self):
        assert set(LIVE_TUNABLE) == {
            "scales.spatial", "scales.temporal", "characterisation.theta"}

    @pytest.mark.parametrize("key", [
        "atn.theta1", "characterisation.radius", "engine.tick_ms", "nonsense",
    ])
    def test_everything_else_is_rejected(self, key):
        with pytest.raises(UnknownConfigKey):
            set_config_value(RunConfig(), key, 1.0)

    @pytest.mark.parametrize("value", ["fast", None, True, [1]])
    def test_values_must_be_numbers(self, value):
        with pytest.raises(ConfigError):
            set_config_value(RunConfig(), "scales.spatial", value)

    def test_new_values_still_face_section_validation(self):
        with pytest.raises(ConfigError):
            set_config_value(RunConfig(), "scales.spatial", -5)

    def test_tuning_does_not_disturb_sibling_keys(self):
        cfg = RunConfig()
        set_config_value(cfg, "characterisation.theta", 0.2)
        assert cfg.characterisation.theta == 0.2
        assert cfg.characterisation.radius == 0.5
        assert cfg.characterisation.every == 1
