"""Config validation, round-tripping, and hashing."""

import pytest

from splitq.config import (
    AgentSpec,
    ConfigError,
    ExperimentConfig,
    config_from_dict,
    config_hash,
    parse_config,
)


def minimal(kind="igt", **extra):
    data = {"kind": kind, "seed": 42, "agents": ["QL", "SQL"]}
    data.update(extra)
    return data


class TestParsing:
    def test_minimal_defaults(self):
        config = config_from_dict(minimal())
        assert config.kind == "igt"
        assert config.seed == 42
        assert [s.kind.value for s in config.agents] == ["QL", "SQL"]
        assert config.horizon == 500
        assert config.runs == 20
        assert config.igt_scheme == 1
        assert config.export_trajectories is False

    def test_agent_mapping_form_with_overrides(self):
        config = config_from_dict(
            minimal(agents=[{"kind": "SQL", "epsilon": 0.1, "gamma": 0.9}, "QL"])
        )
        spec = config.agents[0]
        assert spec.kind.value == "SQL"
        assert spec.overrides_dict() == {"epsilon": 0.1, "gamma": 0.9}

    def test_override_order_is_canonical(self):
        a = config_from_dict(minimal(agents=[{"kind": "SQL", "epsilon": 0.1, "gamma": 0.9}]))
        b = config_from_dict(minimal(agents=[{"kind": "SQL", "gamma": 0.9, "epsilon": 0.1}]))
        assert a.agents == b.agents
        assert config_hash(a) == config_hash(b)

    def test_yaml_file_round_trip(self, tmp_path):
        path = tmp_path / "exp.yaml"
        path.write_text(
            "kind: pacman\n"
            "seed: 7\n"
            "agents:\n"
            "  - QL\n"
            "  - SQL\n"
            "runs: 2\n"
            "episodes: 30\n"
            "pacman:\n"
            "  modes: [stationary, scaling]\n"
            "  batch_size: 5\n"
            "  max_frames: 200\n"
            "  alpha: 0.25\n",
            encoding="utf-8",
        )
        config = parse_config(path)
        assert config.kind == "pacman"
        assert [m.value for m in config.modes] == ["stationary", "scaling"]
        assert config.batch_size == 5
        assert config.max_frames == 200
        assert config.linear_alpha == 0.25
        # to_dict() -> config_from_dict() is the identity on parsed configs.
        assert config_from_dict(config.to_dict()) == config

    def test_igt_round_trip(self):
        config = config_from_dict(minimal(igt={"scheme": 2}, runs=5))
        assert config.igt_scheme == 2
        assert config_from_dict(config.to_dict()) == config

    def test_invalid_yaml_reports_config_error(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("kind: [unclosed\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            parse_config(path)


class TestValidation:
    def test_problems_are_collected_not_first_only(self):
        data = {
            "kind": "nope",
            "seed": -1,
            "agents": ["QL", "mystery"],
            "horizon": 0,
            "surprise": True,
        }
        with pytest.raises(ConfigError) as excinfo:
            config_from_dict(data)
        problems = excinfo.value.problems
        assert len(problems) >= 5
        text = "\n".join(problems)
        assert "kind" in text and "seed" in text and "mystery" in text
        assert "surprise" in text and "horizon" in text

    def test_missing_required_keys(self):
        with pytest.raises(ConfigError) as excinfo:
            config_from_dict({})
        text = str(excinfo.value)
        assert "'kind'" in text and "'seed'" in text and "'agents'" in text

    def test_bool_is_not_an_int(self):
        with pytest.raises(ConfigError) as excinfo:
            config_from_dict(minimal(seed=True))
        assert any("seed" in p and "bool" in p for p in excinfo.value.problems)

    def test_seed_must_fit_unsigned_64(self):
        with pytest.raises(ConfigError):
            config_from_dict(minimal(seed=2**64))
        config_from_dict(minimal(seed=2**64 - 1))  # boundary accepted

    def test_empty_and_duplicate_agents(self):
        with pytest.raises(ConfigError):
            config_from_dict(minimal(agents=[]))
        with pytest.raises(ConfigError):
            config_from_dict(minimal(agents=["QL", "QL"]))

    def test_unknown_override_key(self):
        with pytest.raises(ConfigError) as excinfo:
            config_from_dict(minimal(agents=[{"kind": "SQL", "speed": 3}]))
        assert any("speed" in p for p in excinfo.value.problems)

    def test_override_ranges(self):
        for bad in (
            {"kind": "SQL", "epsilon": 1.5},
            {"kind": "SQL", "gamma": -0.1},
            {"kind": "SQL", "w_pos": -2},
            {"kind": "SQL", "lr_exponent": 0},
        ):
            with pytest.raises(ConfigError):
                config_from_dict(minimal(agents=[bad]))

    def test_igt_scheme_validated(self):
        with pytest.raises(ConfigError):
            config_from_dict(minimal(igt={"scheme": 3}))
        with pytest.raises(ConfigError):
            config_from_dict(minimal(igt={"scheme": 1, "bonus": 2}))

    def test_sections_must_match_kind(self):
        with pytest.raises(ConfigError):
            config_from_dict(minimal(kind="igt", pacman={"batch_size": 5}))
        with pytest.raises(ConfigError):
            config_from_dict(minimal(kind="pacman", igt={"scheme": 1}))
        with pytest.raises(ConfigError):
            config_from_dict(minimal(kind="igt", scenarios=10))

    def test_pacman_mode_validation(self):
        with pytest.raises(ConfigError):
            config_from_dict(minimal(kind="pacman", pacman={"modes": ["sideways"]}))
        with pytest.raises(ConfigError):
            config_from_dict(minimal(kind="pacman", pacman={"modes": []}))
        with pytest.raises(ConfigError):
            config_from_dict(
                minimal(kind="pacman", pacman={"modes": ["scaling", "scaling"]})
            )

    def test_pacman_alpha_range(self):
        with pytest.raises(ConfigError):
            config_from_dict(minimal(kind="pacman", pacman={"alpha": 0.0}))
        with pytest.raises(ConfigError):
            config_from_dict(minimal(kind="pacman", pacman={"alpha": 1.5}))

    def test_top_level_must_be_mapping(self):
        with pytest.raises(ConfigError):
            config_from_dict(["kind", "igt"])


class TestHashing:
    def test_hash_is_twelve_hex_chars(self):
        digest = config_hash(config_from_dict(minimal()))
        assert len(digest) == 12
        int(digest, 16)

    def test_hash_stable_and_sensitive(self):
        a = config_from_dict(minimal())
        b = config_from_dict(minimal())
        assert config_hash(a) == config_hash(b)
        c = config_from_dict(minimal(seed=43))
        assert config_hash(a) != config_hash(c)
        d = config_from_dict(minimal(agents=["SQL", "QL"]))
        assert config_hash(a) != config_hash(d)  # agent order is meaningful

    def test_hash_ignores_source_dict_key_order(self):
        a = config_from_dict({"kind": "igt", "seed": 1, "agents": ["QL"]})
        b = config_from_dict({"agents": ["QL"], "seed": 1, "kind": "igt"})
        assert config_hash(a) == config_hash(b)
