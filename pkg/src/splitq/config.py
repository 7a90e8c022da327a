"""Experiment configuration: YAML in, validated dataclass out.

Configs are strict: unknown keys, bad types, and out-of-range values are all
collected and reported together in one ConfigError rather than one at a time.
A parsed config can be serialised back to an equivalent dict, and its
canonical JSON form is hashed so every output file can state which
configuration produced it.
"""

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

import yaml

from .agents import AgentKind
from .envs import SCHEMES, NonstationarityMode

__all__ = [
    "ConfigError",
    "AgentSpec",
    "ExperimentConfig",
    "parse_config",
    "config_from_dict",
    "config_hash",
    "EXPERIMENT_KINDS",
]

EXPERIMENT_KINDS = ("mdp-tournament", "igt", "pacman")

# AgentParams fields a config may override per agent.
_PARAM_KEYS = ("lambda_pos", "w_pos", "lambda_neg", "w_neg", "gamma", "epsilon", "lr_exponent")

_TOP_KEYS = {
    "kind",
    "seed",
    "agents",
    "horizon",
    "runs",
    "scenarios",
    "episodes",
    "igt",
    "pacman",
    "export_trajectories",
}


class ConfigError(ValueError):
    """All problems found in a config, reported together."""

    def __init__(self, problems):
        self.problems = list(problems)
        lines = "\n".join(f"  - {p}" for p in self.problems)
        super().__init__(f"invalid config ({len(self.problems)} problem(s)):\n{lines}")


@dataclass(frozen=True)
class AgentSpec:
    """One experiment entry: a kind plus optional hyperparameter overrides."""

    kind: AgentKind
    overrides: tuple = ()

    def overrides_dict(self) -> dict:
        return dict(self.overrides)

    def to_dict(self):
        if not self.overrides:
            return self.kind.value
        out = {"kind": self.kind.value}
        out.update(self.overrides_dict())
        return out


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything an experiment run needs apart from the output directory."""

    kind: str
    seed: int
    agents: tuple
    horizon: int = 500
    runs: int = 20
    scenarios: int = 100
    episodes: int = 100
    igt_scheme: int = 1
    modes: tuple = (NonstationarityMode.STATIONARY,)
    batch_size: int = 10
    layout: Optional[str] = None
    max_frames: int = 400
    linear_alpha: float = 0.2
    export_trajectories: bool = False

    def agent_kinds(self):
        return [spec.kind for spec in self.agents]

    def to_dict(self) -> dict:
        """Round-trippable plain-dict form (also the hashing input)."""
        out = {
            "kind": self.kind,
            "seed": self.seed,
            "agents": [spec.to_dict() for spec in self.agents],
            "horizon": self.horizon,
            "runs": self.runs,
            "export_trajectories": self.export_trajectories,
        }
        if self.kind == "mdp-tournament":
            out["scenarios"] = self.scenarios
        if self.kind == "igt":
            out["igt"] = {"scheme": self.igt_scheme}
        if self.kind == "pacman":
            out["episodes"] = self.episodes
            out["pacman"] = {
                "modes": [m.value for m in self.modes],
                "batch_size": self.batch_size,
                "layout": self.layout,
                "max_frames": self.max_frames,
                "alpha": self.linear_alpha,
            }
        return out


def config_hash(config: ExperimentConfig) -> str:
    """Short stable digest of the canonical config dict."""
    canon = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def _typename(types) -> str:
    if isinstance(types, tuple):
        return " or ".join(t.__name__ for t in types)
    return types.__name__


def _expect(problems, data, key, types, default=None, required=False, where="config"):
    """Fetch data[key] with a type check; records a problem on mismatch."""
    if not isinstance(types, tuple):
        types = (types,)
    if key not in data:
        if required:
            problems.append(f"{where}: missing required key {key!r}")
        return default
    value = data[key]
    if isinstance(value, bool) and bool not in types:
        problems.append(f"{where}: {key!r} must be {_typename(types)}, got bool")
        return default
    if not isinstance(value, types):
        problems.append(
            f"{where}: {key!r} must be {_typename(types)}, got {type(value).__name__}"
        )
        return default
    return value


def _check_positive(problems, value, key, where="config", minimum=1):
    if value is not None and value < minimum:
        problems.append(f"{where}: {key!r} must be >= {minimum}, got {value}")


def _parse_agent_entry(entry, index, problems) -> Optional[AgentSpec]:
    where = f"agents[{index}]"
    if isinstance(entry, str):
        try:
            return AgentSpec(kind=AgentKind.parse(entry))
        except ValueError as exc:
            problems.append(f"{where}: {exc}")
            return None
    if not isinstance(entry, dict):
        problems.append(f"{where}: must be an agent name or a mapping, got {type(entry).__name__}")
        return None
    if "kind" not in entry:
        problems.append(f"{where}: mapping form needs a 'kind' key")
        return None
    try:
        kind = AgentKind.parse(entry["kind"])
    except ValueError as exc:
        problems.append(f"{where}: {exc}")
        return None
    overrides = []
    for key, value in entry.items():
        if key == "kind":
            continue
        if key not in _PARAM_KEYS:
            problems.append(f"{where}: unknown override {key!r}; allowed: {', '.join(_PARAM_KEYS)}")
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            problems.append(f"{where}: override {key!r} must be a number, got {type(value).__name__}")
            continue
        value = float(value)
        if key in ("gamma", "epsilon") and not 0.0 <= value <= 1.0:
            problems.append(f"{where}: {key!r} must lie in [0, 1], got {value}")
            continue
        if key in ("lambda_pos", "w_pos", "lambda_neg", "w_neg") and value < 0.0:
            problems.append(f"{where}: {key!r} must be >= 0, got {value}")
            continue
        if key == "lr_exponent" and value <= 0.0:
            problems.append(f"{where}: {key!r} must be > 0, got {value}")
            continue
        overrides.append((key, value))
    return AgentSpec(kind=kind, overrides=tuple(sorted(overrides)))


def config_from_dict(data) -> ExperimentConfig:
    """Validate a plain dict (already parsed YAML/JSON) into an ExperimentConfig."""
    problems = []
    if not isinstance(data, dict):
        raise ConfigError([f"top level must be a mapping, got {type(data).__name__}"])
    for key in data:
        if key not in _TOP_KEYS:
            problems.append(f"config: unknown key {key!r}")

    kind = _expect(problems, data, "kind", str, required=True)
    if kind is not None and kind not in EXPERIMENT_KINDS:
        problems.append(f"config: 'kind' must be one of {', '.join(EXPERIMENT_KINDS)}, got {kind!r}")
        kind = None

    seed = _expect(problems, data, "seed", int, required=True)
    if seed is not None and not 0 <= seed < 2**64:
        problems.append(f"config: 'seed' must fit in an unsigned 64-bit int, got {seed}")

    agents_raw = _expect(problems, data, "agents", list, required=True)
    agents = []
    if agents_raw is not None:
        if not agents_raw:
            problems.append("config: 'agents' must not be empty")
        for i, entry in enumerate(agents_raw):
            spec = _parse_agent_entry(entry, i, problems)
            if spec is not None:
                agents.append(spec)
        labels = [s.kind for s in agents]
        if len(set(labels)) != len(labels):
            problems.append("config: duplicate agent kinds")

    horizon = _expect(problems, data, "horizon", int, default=500)
    _check_positive(problems, horizon, "horizon")
    runs = _expect(problems, data, "runs", int, default=20)
    _check_positive(problems, runs, "runs")
    scenarios = _expect(problems, data, "scenarios", int, default=100)
    _check_positive(problems, scenarios, "scenarios")
    episodes = _expect(problems, data, "episodes", int, default=100)
    _check_positive(problems, episodes, "episodes")
    export = _expect(problems, data, "export_trajectories", bool, default=False)

    igt_scheme = 1
    if "igt" in data:
        igt_raw = _expect(problems, data, "igt", dict, default={})
        if igt_raw:
            for key in igt_raw:
                if key != "scheme":
                    problems.append(f"igt: unknown key {key!r}")
            scheme = _expect(problems, igt_raw, "scheme", int, default=1, where="igt")
            if scheme not in SCHEMES:
                problems.append(f"igt: 'scheme' must be one of {sorted(SCHEMES)}, got {scheme}")
            else:
                igt_scheme = scheme

    modes = (NonstationarityMode.STATIONARY,)
    batch_size = 10
    layout = None
    max_frames = 400
    linear_alpha = 0.2
    if "pacman" in data:
        pac_raw = _expect(problems, data, "pacman", dict, default={})
        if pac_raw:
            for key in pac_raw:
                if key not in ("modes", "batch_size", "layout", "max_frames", "alpha"):
                    problems.append(f"pacman: unknown key {key!r}")
            modes_raw = _expect(problems, pac_raw, "modes", list, where="pacman")
            if modes_raw is not None:
                parsed = []
                for m in modes_raw:
                    try:
                        parsed.append(NonstationarityMode.parse(m))
                    except ValueError as exc:
                        problems.append(f"pacman: {exc}")
                if parsed:
                    if len(set(parsed)) != len(parsed):
                        problems.append("pacman: duplicate modes")
                    modes = tuple(parsed)
                else:
                    problems.append("pacman: 'modes' must not be empty")
            batch_size = _expect(problems, pac_raw, "batch_size", int, default=10, where="pacman")
            _check_positive(problems, batch_size, "batch_size", where="pacman")
            layout = _expect(problems, pac_raw, "layout", (str, type(None)), where="pacman")
            max_frames = _expect(problems, pac_raw, "max_frames", int, default=400, where="pacman")
            _check_positive(problems, max_frames, "max_frames", where="pacman")
            alpha_raw = _expect(problems, pac_raw, "alpha", (int, float), default=0.2, where="pacman")
            if alpha_raw is not None:
                linear_alpha = float(alpha_raw)
                if not 0.0 < linear_alpha <= 1.0:
                    problems.append(f"pacman: 'alpha' must lie in (0, 1], got {linear_alpha}")

    if kind == "pacman" and "scenarios" in data:
        problems.append("config: 'scenarios' only applies to mdp-tournament")
    if kind == "igt" and "scenarios" in data:
        problems.append("config: 'scenarios' only applies to mdp-tournament")
    if kind is not None and kind != "pacman" and "pacman" in data:
        problems.append("config: 'pacman' section only applies to the pacman kind")
    if kind is not None and kind != "igt" and "igt" in data:
        problems.append("config: 'igt' section only applies to the igt kind")

    if problems:
        raise ConfigError(problems)
    return ExperimentConfig(
        kind=kind,
        seed=seed,
        agents=tuple(agents),
        horizon=horizon,
        runs=runs,
        scenarios=scenarios,
        episodes=episodes,
        igt_scheme=igt_scheme,
        modes=modes,
        batch_size=batch_size,
        layout=layout,
        max_frames=max_frames,
        linear_alpha=linear_alpha,
        export_trajectories=export,
    )


def parse_config(path) -> ExperimentConfig:
    """Load and validate a YAML experiment file."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = yaml.safe_load(handle)
        except yaml.YAMLError as exc:
            raise ConfigError([f"not valid YAML: {exc}"]) from exc
    return config_from_dict(data)
