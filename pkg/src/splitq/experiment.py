"""Experiment orchestration: run a validated config, write delimited outputs.

Every output file is plain comma-separated text whose first line is a comment
``# config_hash=<digest>`` tying it to the producing configuration.  A
``manifest.json`` lists the files with their schemas plus the exact config
dict.  Nothing in any output depends on wall-clock time or filesystem order,
so equal configs and seeds produce byte-identical directories.

File schemas by experiment kind:

  mdp-tournament
    summary.csv   agent,avg_wins_pct,avg_ranking,mean_final
    matrix.csv    row_agent,col_agent,wins,losses,ties
    curves.csv    agent,step,mean_cum,stderr_cum
  igt
    finals.csv    agent,runs,mean_final,stderr_final
    curves.csv    agent,step,mean_cum,stderr_cum
  pacman
    scores.csv    mode,agent,runs,episodes,tail_episodes,mean_final,stderr_final
    curves.csv    mode,agent,episode,mean_score,stderr_score

With trajectory export enabled, igt and mdp-tournament add trajectories.csv
(agent,run,step,pos_cum,neg_cum,combined_cum; the tournament exports its
first scenario only) and pacman adds episodes.csv
(mode,agent,run,episode,score).
"""

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .agents import AgentKind, make_agent, preset_params
from .config import AgentSpec, ExperimentConfig, config_hash
from .core import AgentParams, RewardPair, RunSeed
from .envs import (
    SCHEMES,
    IgtEnv,
    MdpEnv,
    NonstationaryEnv,
    PacmanEnv,
    PacmanFeatures,
    generate_scenario,
    load_layout,
)
from .tournament import CurveAccumulator, run_episodes, run_mdp_tournament, run_rollout

__all__ = [
    "run_igt_study",
    "IgtStudyResult",
    "run_pacman_study",
    "PacmanStudyResult",
    "run_experiment",
    "export_trajectories",
    "TAIL_FRACTION",
    "IGT_REPORT_UNIT",
]

# Fraction of trailing episodes that define a run's "final" performance.
TAIL_FRACTION = 0.25

# Gambling-task deck payoffs are defined per card, but published scores for
# this task are reported in net-outcome-per-block units (the schemes table
# expresses each deck's net outcome per 10 cards), one tenth of the per-card
# sum.  The study feeds and reports rewards in the published unit; tabular
# value learning is invariant to the common factor, so behaviour is
# unaffected and reported scores are directly comparable.
IGT_REPORT_UNIT = 10.0


class _ReportUnitEnv:
    """Wraps an environment, dividing every emitted reward by ``unit``."""

    def __init__(self, env, unit: float):
        self.env = env
        self.unit = float(unit)

    def reset(self):
        return self.env.reset()

    def n_actions(self, state) -> int:
        return self.env.n_actions(state)

    def step(self, state, action):
        next_state, pair, done = self.env.step(state, action)
        scaled = RewardPair(pair.pos / self.unit, pair.neg / self.unit)
        return next_state, scaled, done


def _build_params(spec: AgentSpec, param_rng):
    """Materialise a spec's overrides on top of its preset sample, if any."""
    if not spec.overrides:
        return None
    base = preset_params(spec.kind, param_rng)
    return replace(base, **spec.overrides_dict())


def _as_specs(kinds):
    specs = []
    for entry in kinds:
        if isinstance(entry, AgentSpec):
            specs.append(entry)
        else:
            specs.append(AgentSpec(kind=AgentKind.parse(entry)))
    return specs


@dataclass
class IgtStudyResult:
    """Per-kind final scores and learning curves on the gambling task."""

    kinds: list
    finals: np.ndarray  # (n_kinds, runs) final cumulative score per run
    curves: dict  # label -> CurveAccumulator over cumulative curves
    trajectories: list

    def mean_final(self, kind) -> float:
        label = AgentKind.parse(kind).value
        return float(self.finals[self.kinds.index(label)].mean())

    def stderr_final(self, kind) -> float:
        label = AgentKind.parse(kind).value
        row = self.finals[self.kinds.index(label)]
        if row.size < 2:
            return 0.0
        return float(row.std(ddof=1) / np.sqrt(row.size))


def run_igt_study(
    kinds,
    seed,
    scheme_id: int = 1,
    runs: int = 200,
    horizon: int = 500,
    collect_curves: bool = True,
    keep_trajectories: bool = False,
) -> IgtStudyResult:
    """Independent repeated runs of each kind on one payoff scheme.

    All kinds share the deck payout streams: the k-th card drawn from a deck
    is identical whoever draws it, so score differences reflect choices, not
    luck.  Each run samples fresh preset parameters for the noisy presets.
    Rewards and scores are in the published reporting unit (see
    ``IGT_REPORT_UNIT``).
    """
    if not isinstance(seed, RunSeed):
        seed = RunSeed(seed)
    if scheme_id not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme_id!r}; known: {sorted(SCHEMES)}")
    specs = _as_specs(kinds)
    scheme = SCHEMES[scheme_id]
    labels = [s.kind.value for s in specs]
    finals = np.zeros((len(specs), runs))
    curves = {label: CurveAccumulator(horizon) for label in labels} if collect_curves else {}
    trajectories = []
    for k, spec in enumerate(specs):
        label = labels[k]
        for r in range(runs):
            env = _ReportUnitEnv(
                IgtEnv(
                    scheme,
                    deck_rngs=[seed.stream("env", r, deck) for deck in range(4)],
                    horizon=horizon,
                ),
                IGT_REPORT_UNIT,
            )
            param_rng = seed.stream("params", r, label)
            agent = make_agent(
                spec.kind,
                rng=seed.stream("explore", r, label),
                params=_build_params(spec, param_rng),
                param_rng=param_rng,
            )
            trajectory = run_rollout(agent, env, horizon, record=False, seed_path=("igt", r, label))
            finals[k, r] = trajectory.final_score
            if collect_curves:
                curves[label].add(trajectory.cumulative)
            if keep_trajectories:
                trajectories.append(trajectory)
    return IgtStudyResult(kinds=labels, finals=finals, curves=curves, trajectories=trajectories)


@dataclass
class PacmanStudyResult:
    """Episode scores for every (mode, kind) condition of the chase task."""

    kinds: list
    modes: list
    scores: dict  # (mode_value, label) -> ndarray (runs, episodes)

    def episode_curve(self, mode, kind):
        """Mean and stderr per episode index across runs."""
        block = self.scores[(str(mode), AgentKind.parse(kind).value)]
        mean = block.mean(axis=0)
        if block.shape[0] < 2:
            stderr = np.zeros(block.shape[1])
        else:
            stderr = block.std(axis=0, ddof=1) / np.sqrt(block.shape[0])
        return mean, stderr

    def tail_scores(self, mode, kind, tail_fraction: float = TAIL_FRACTION) -> np.ndarray:
        """Per-run mean score over the trailing fraction of episodes."""
        block = self.scores[(str(mode), AgentKind.parse(kind).value)]
        tail = max(1, int(round(block.shape[1] * tail_fraction)))
        return block[:, -tail:].mean(axis=1)

    def mean_final(self, mode, kind) -> float:
        return float(self.tail_scores(mode, kind).mean())


def run_pacman_study(
    kinds,
    seed,
    modes=("stationary",),
    runs: int = 3,
    episodes: int = 100,
    layout_path: Optional[str] = None,
    batch_size: int = 10,
    max_frames: int = 400,
    alpha: float = 0.2,
) -> PacmanStudyResult:
    """Linear-approximation agents on the chase task under reward transforms.

    Every kind runs ``runs`` independent learners of ``episodes`` episodes in
    every mode.  The batch events that gate the transforms are drawn from a
    per-(mode, run) stream shared by all kinds, so each kind faces the same
    perturbation schedule.
    """
    if not isinstance(seed, RunSeed):
        seed = RunSeed(seed)
    specs = _as_specs(kinds)
    layout = load_layout(layout_path)
    features = PacmanFeatures(layout)
    labels = [s.kind.value for s in specs]
    mode_values = [str(getattr(m, "value", m)) for m in modes]
    scores = {}
    for mode in mode_values:
        for k, spec in enumerate(specs):
            label = labels[k]
            block = np.zeros((runs, episodes))
            for r in range(runs):
                env = PacmanEnv(layout, rng=seed.stream("env", mode, r, label), max_frames=max_frames)
                wrapped = NonstationaryEnv(
                    env, mode, rng=seed.stream("events", mode, r), batch_size=batch_size
                )
                param_rng = seed.stream("params", mode, r, label)
                agent = make_agent(
                    spec.kind,
                    rng=seed.stream("explore", mode, r, label),
                    params=_build_params(spec, param_rng),
                    param_rng=param_rng,
                    feature_extractor=features,
                    feature_dim=features.dim,
                    linear_alpha=alpha,
                )
                block[r] = run_episodes(agent, wrapped, episodes)
            scores[(mode, label)] = block
    return PacmanStudyResult(kinds=labels, modes=mode_values, scores=scores)


# ---------------------------------------------------------------------------
# Output writing
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".6f")


def _write_csv(path: Path, digest: str, header, rows) -> int:
    lines = [f"# config_hash={digest}", ",".join(header)]
    for row in rows:
        lines.append(",".join(str(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return len(rows)


def export_trajectories(trajectories, path: Path, digest: str) -> int:
    """Write per-step cumulative stream records for a batch of trajectories."""
    header = ("agent", "run", "step", "pos_cum", "neg_cum", "combined_cum")
    rows = []
    for trajectory in trajectories:
        run_label = trajectory.seed_path[-2] if trajectory.seed_path else 0
        pos_cum = np.cumsum(trajectory.pos)
        neg_cum = np.cumsum(trajectory.neg)
        for t in range(len(trajectory)):
            rows.append(
                (
                    trajectory.kind,
                    run_label,
                    t,
                    _fmt(pos_cum[t]),
                    _fmt(neg_cum[t]),
                    _fmt(pos_cum[t] + neg_cum[t]),
                )
            )
    return _write_csv(Path(path), digest, header, rows)


def _manifest(config: ExperimentConfig, digest: str, files: dict) -> dict:
    base = AgentParams()
    return {
        "config": config.to_dict(),
        "config_hash": digest,
        "package": {"name": "splitq", "version": __version__},
        # Agent defaults materialized so output directories are self-describing
        # even when the config leaves them implicit (per-agent overrides, if
        # any, appear in the config echo above).
        "defaults": {
            "gamma": base.gamma,
            "epsilon": base.epsilon,
            "lr_exponent": base.lr_exponent,
            "linear_alpha": config.linear_alpha,
        },
        "conventions": {
            "tie_handling": "exact score ties are excluded from win percentages; an all-tie pairing scores 0.5",
            "ranking": "per-scenario rank of mean final score, ties share the mean rank, 1 is best",
            "pacman_final": f"per-run mean over the trailing {TAIL_FRACTION:.0%} of episodes",
            "igt_unit": f"gambling-task rewards and scores are per-card deck payoffs divided by {IGT_REPORT_UNIT:g} (net-outcome-per-block reporting unit)",
        },
        "files": files,
    }


def _run_mdp_experiment(config, out, digest, n_jobs):
    result = run_mdp_tournament(
        [s.kind for s in config.agents],
        RunSeed(config.seed),
        n_scenarios=config.scenarios,
        runs_per_scenario=config.runs,
        horizon=config.horizon,
        collect_curves=True,
        n_jobs=n_jobs,
    )
    files = {}
    rows = []
    mean_finals = result.finals.mean(axis=1)
    for i, label in enumerate(result.kinds):
        rows.append((label, _fmt(result.avg_wins[i]), _fmt(result.avg_ranking[i]), _fmt(mean_finals[i])))
    files["summary.csv"] = _write_csv(
        out / "summary.csv", digest, ("agent", "avg_wins_pct", "avg_ranking", "mean_final"), rows
    )
    rows = []
    for i, row_label in enumerate(result.kinds):
        for j, col_label in enumerate(result.kinds):
            if i == j:
                continue
            rows.append((row_label, col_label, int(result.wins[i, j]), int(result.wins[j, i]), int(result.ties[i, j])))
    files["matrix.csv"] = _write_csv(
        out / "matrix.csv", digest, ("row_agent", "col_agent", "wins", "losses", "ties"), rows
    )
    rows = []
    for label in result.kinds:
        acc = result.curves[label]
        mean, stderr = acc.mean(), acc.stderr()
        for t in range(acc.length):
            rows.append((label, t, _fmt(mean[t]), _fmt(stderr[t])))
    files["curves.csv"] = _write_csv(
        out / "curves.csv", digest, ("agent", "step", "mean_cum", "stderr_cum"), rows
    )
    if config.export_trajectories:
        seed = RunSeed(config.seed)
        scenario = generate_scenario(seed.stream("scenario", 0))
        trajectories = []
        for spec in config.agents:
            label = spec.kind.value
            for r in range(config.runs):
                env = MdpEnv(
                    scenario,
                    left_rng=seed.stream("env", 0, r, "left"),
                    right_rng=seed.stream("env", 0, r, "right"),
                )
                param_rng = seed.stream("params", 0, r, label)
                agent = make_agent(
                    spec.kind,
                    rng=seed.stream("explore", 0, r, label),
                    params=_build_params(spec, param_rng),
                    param_rng=param_rng,
                )
                trajectories.append(
                    run_rollout(agent, env, config.horizon, record=False, seed_path=("mdp", 0, r, label))
                )
        files["trajectories.csv"] = export_trajectories(trajectories, out / "trajectories.csv", digest)
    return result, files


def _run_igt_experiment(config, out, digest):
    result = run_igt_study(
        config.agents,
        RunSeed(config.seed),
        scheme_id=config.igt_scheme,
        runs=config.runs,
        horizon=config.horizon,
        collect_curves=True,
        keep_trajectories=config.export_trajectories,
    )
    files = {}
    rows = []
    for i, label in enumerate(result.kinds):
        rows.append((label, config.runs, _fmt(result.mean_final(label)), _fmt(result.stderr_final(label))))
    files["finals.csv"] = _write_csv(
        out / "finals.csv", digest, ("agent", "runs", "mean_final", "stderr_final"), rows
    )
    rows = []
    for label in result.kinds:
        acc = result.curves[label]
        mean, stderr = acc.mean(), acc.stderr()
        for t in range(acc.length):
            rows.append((label, t, _fmt(mean[t]), _fmt(stderr[t])))
    files["curves.csv"] = _write_csv(
        out / "curves.csv", digest, ("agent", "step", "mean_cum", "stderr_cum"), rows
    )
    if config.export_trajectories:
        files["trajectories.csv"] = export_trajectories(
            result.trajectories, out / "trajectories.csv", digest
        )
    return result, files


def _run_pacman_experiment(config, out, digest):
    result = run_pacman_study(
        config.agents,
        RunSeed(config.seed),
        modes=config.modes,
        runs=config.runs,
        episodes=config.episodes,
        layout_path=config.layout,
        batch_size=config.batch_size,
        max_frames=config.max_frames,
        alpha=config.linear_alpha,
    )
    files = {}
    rows = []
    tail = max(1, int(round(config.episodes * TAIL_FRACTION)))
    for mode in result.modes:
        for label in result.kinds:
            tails = result.tail_scores(mode, label)
            stderr = 0.0 if tails.size < 2 else float(tails.std(ddof=1) / np.sqrt(tails.size))
            rows.append(
                (mode, label, config.runs, config.episodes, tail, _fmt(tails.mean()), _fmt(stderr))
            )
    files["scores.csv"] = _write_csv(
        out / "scores.csv",
        digest,
        ("mode", "agent", "runs", "episodes", "tail_episodes", "mean_final", "stderr_final"),
        rows,
    )
    rows = []
    for mode in result.modes:
        for label in result.kinds:
            mean, stderr = result.episode_curve(mode, label)
            for e in range(mean.size):
                rows.append((mode, label, e, _fmt(mean[e]), _fmt(stderr[e])))
    files["curves.csv"] = _write_csv(
        out / "curves.csv", digest, ("mode", "agent", "episode", "mean_score", "stderr_score"), rows
    )
    if config.export_trajectories:
        rows = []
        for mode in result.modes:
            for label in result.kinds:
                block = result.scores[(mode, label)]
                for r in range(block.shape[0]):
                    for e in range(block.shape[1]):
                        rows.append((mode, label, r, e, _fmt(block[r, e])))
        files["episodes.csv"] = _write_csv(
            out / "episodes.csv", digest, ("mode", "agent", "run", "episode", "score"), rows
        )
    return result, files


def run_experiment(config: ExperimentConfig, out_dir, n_jobs: int = 1) -> dict:
    """Run ``config`` and write its outputs under ``out_dir``.

    Returns ``{"result": <study result>, "files": {name: rows}, "out_dir": path}``.
    The directory is created if needed; existing files are overwritten.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digest = config_hash(config)
    if config.kind == "mdp-tournament":
        result, files = _run_mdp_experiment(config, out, digest, n_jobs)
    elif config.kind == "igt":
        result, files = _run_igt_experiment(config, out, digest)
    elif config.kind == "pacman":
        result, files = _run_pacman_experiment(config, out, digest)
    else:
        raise ValueError(f"unknown experiment kind {config.kind!r}")
    manifest = _manifest(config, digest, files)
    (out / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return {"result": result, "files": files, "out_dir": str(out)}
