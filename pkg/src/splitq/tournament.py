"""Rollout execution, pairwise comparison, and tournament aggregation.

A tournament run gives every agent the same environment randomness: reward
draws are keyed by (scenario, run, arm) and doled out by visit order, so the
k-th pull of an arm pays every agent the same amount.  Scores are therefore
comparable pointwise, and self-play produces exact ties.

The scheduling unit is one scenario; scenarios can be fanned out over a
joblib worker pool because every stream is derived from the master seed by
name, never from shared mutable generator state.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .agents import AgentKind, make_agent
from .core import RunSeed
from .envs import MdpEnv, ScenarioSpec, generate_scenario

__all__ = [
    "Trajectory",
    "CurveAccumulator",
    "run_rollout",
    "run_episodes",
    "learning_curve",
    "pairwise_compare",
    "PairwiseOutcome",
    "aggregate",
    "run_mdp_tournament",
    "TournamentResult",
    "average_ranks",
]


@dataclass
class Trajectory:
    """The record of one rollout: per-step streams plus summary scores."""

    kind: str
    actions: np.ndarray
    pos: np.ndarray
    neg: np.ndarray
    cumulative: np.ndarray
    episode_returns: np.ndarray
    final_score: float
    states: Optional[list] = None
    seed_path: Optional[tuple] = None

    def __len__(self) -> int:
        return len(self.actions)


def run_rollout(agent, env, horizon: int, record: bool = True, seed_path=None) -> Trajectory:
    """Drive ``agent`` through ``env`` for exactly ``horizon`` actions.

    Terminal transitions restart the environment and keep counting, so the
    action budget rather than the episode count is fixed.  The agent sees
    ``next_state=None`` on terminal steps and never bootstraps across a
    restart.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon!r}")
    actions = np.empty(horizon, dtype=np.int64)
    pos = np.empty(horizon)
    neg = np.empty(horizon)
    states = [] if record else None
    episode_returns = []
    episode_sum = 0.0
    state = env.reset()
    agent.begin_episode()
    for t in range(horizon):
        action = agent.act(state, env.n_actions(state))
        next_state, pair, done = env.step(state, action)
        agent.observe(
            state,
            action,
            pair,
            None if done else next_state,
            0 if done else env.n_actions(next_state),
        )
        actions[t] = action
        pos[t] = pair.pos
        neg[t] = pair.neg
        if record:
            states.append(state)
        episode_sum += pair.combined
        if done:
            episode_returns.append(episode_sum)
            episode_sum = 0.0
            state = env.reset()
            agent.begin_episode()
        else:
            state = next_state
    cumulative = np.cumsum(pos + neg)
    return Trajectory(
        kind=agent.kind.value,
        actions=actions,
        pos=pos,
        neg=neg,
        cumulative=cumulative,
        episode_returns=np.asarray(episode_returns),
        final_score=float(cumulative[-1]),
        states=states,
        seed_path=seed_path,
    )


def run_episodes(agent, env, n_episodes: int) -> np.ndarray:
    """Run whole episodes (reset to done) and return the combined score of each."""
    if n_episodes < 1:
        raise ValueError(f"n_episodes must be >= 1, got {n_episodes!r}")
    scores = np.empty(n_episodes)
    for e in range(n_episodes):
        state = env.reset()
        agent.begin_episode()
        total = 0.0
        done = False
        while not done:
            action = agent.act(state, env.n_actions(state))
            next_state, pair, done = env.step(state, action)
            agent.observe(
                state,
                action,
                pair,
                None if done else next_state,
                0 if done else env.n_actions(next_state),
            )
            total += pair.combined
            state = next_state
        scores[e] = total
    return scores


class CurveAccumulator:
    """Streaming mean and standard error over many equal-length series."""

    def __init__(self, length: int):
        self.length = length
        self.count = 0
        self._sum = np.zeros(length)
        self._sumsq = np.zeros(length)

    def add(self, series: np.ndarray) -> None:
        series = np.asarray(series, dtype=float)
        if series.shape != (self.length,):
            raise ValueError(f"series shape {series.shape} != ({self.length},)")
        self.count += 1
        self._sum += series
        self._sumsq += series * series

    def merge(self, other: "CurveAccumulator") -> None:
        if other.length != self.length:
            raise ValueError("cannot merge accumulators of different lengths")
        self.count += other.count
        self._sum += other._sum
        self._sumsq += other._sumsq

    def mean(self) -> np.ndarray:
        if self.count == 0:
            raise ValueError("no series accumulated")
        return self._sum / self.count

    def stderr(self) -> np.ndarray:
        """Standard error of the mean, 0 when only one series was added."""
        if self.count == 0:
            raise ValueError("no series accumulated")
        if self.count == 1:
            return np.zeros(self.length)
        mean = self.mean()
        var = (self._sumsq - self.count * mean * mean) / (self.count - 1)
        return np.sqrt(np.maximum(var, 0.0) / self.count)


def learning_curve(trajectories) -> tuple:
    """Mean and standard error of the cumulative-reward curves of a batch."""
    trajectories = list(trajectories)
    if not trajectories:
        raise ValueError("no trajectories given")
    acc = CurveAccumulator(len(trajectories[0].cumulative))
    for trajectory in trajectories:
        acc.add(trajectory.cumulative)
    return acc.mean(), acc.stderr()


def average_ranks(scores: np.ndarray) -> np.ndarray:
    """Rank competitors by score, best = 1; exact ties share the mean rank."""
    scores = np.asarray(scores, dtype=float)
    order = np.argsort(-scores, kind="stable")
    ranks = np.empty(scores.size)
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        shared = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


@dataclass
class TournamentResult:
    """Aggregate outcome of an all-pairs tournament.

    ``finals[i, s]`` is competitor i's mean final score in scenario s;
    ``wins[i, j]`` counts scenarios i beat j (strictly better score), with
    exact ties counted in ``ties`` and excluded from win percentages.
    ``avg_wins`` is the mean head-to-head win percentage against the field
    (an all-tie pairing counts as 50), ``avg_ranking`` the mean per-scenario
    rank (1 = best, ties share the mean rank).
    """

    kinds: list
    finals: np.ndarray
    wins: np.ndarray
    ties: np.ndarray
    avg_wins: np.ndarray
    avg_ranking: np.ndarray
    curves: Optional[dict] = None

    def kind_index(self, kind) -> int:
        label = AgentKind.parse(kind).value
        return self.kinds.index(label)


def aggregate(kinds, finals: np.ndarray, curves: Optional[dict] = None) -> TournamentResult:
    """Build the win/tie matrices and summary statistics from scenario scores."""
    finals = np.asarray(finals, dtype=float)
    n_kinds, n_scenarios = finals.shape
    if n_kinds != len(kinds):
        raise ValueError(f"finals has {n_kinds} rows but {len(kinds)} kinds were given")
    wins = np.zeros((n_kinds, n_kinds), dtype=np.int64)
    ties = np.zeros((n_kinds, n_kinds), dtype=np.int64)
    for i in range(n_kinds):
        for j in range(n_kinds):
            if i == j:
                continue
            wins[i, j] = int(np.sum(finals[i] > finals[j]))
            ties[i, j] = int(np.sum(finals[i] == finals[j]))
    avg_wins = np.zeros(n_kinds)
    for i in range(n_kinds):
        shares = []
        for j in range(n_kinds):
            if i == j:
                continue
            decided = wins[i, j] + wins[j, i]
            shares.append(0.5 if decided == 0 else wins[i, j] / decided)
        avg_wins[i] = 100.0 * float(np.mean(shares)) if shares else 0.0
    rank_sum = np.zeros(n_kinds)
    for s in range(n_scenarios):
        rank_sum += average_ranks(finals[:, s])
    avg_ranking = rank_sum / n_scenarios
    labels = [AgentKind.parse(k).value for k in kinds]
    return TournamentResult(
        kinds=labels,
        finals=finals,
        wins=wins,
        ties=ties,
        avg_wins=avg_wins,
        avg_ranking=avg_ranking,
        curves=curves,
    )


def _mdp_run_final(kind, scenario: ScenarioSpec, seed: RunSeed, s_idx: int, r_idx: int, horizon: int):
    """Play one run of one scenario and return (final score, cumulative curve)."""
    kind = AgentKind.parse(kind)
    env = MdpEnv(
        scenario,
        left_rng=seed.stream("env", s_idx, r_idx, "left"),
        right_rng=seed.stream("env", s_idx, r_idx, "right"),
    )
    agent = make_agent(
        kind,
        rng=seed.stream("explore", s_idx, r_idx, kind.value),
        param_rng=seed.stream("params", s_idx, r_idx, kind.value),
    )
    trajectory = run_rollout(agent, env, horizon, record=False)
    return trajectory.final_score, trajectory.cumulative


def _scenario_block(kinds, seed: RunSeed, s_idx: int, runs: int, horizon: int, collect_curves: bool):
    """All runs of all kinds for one scenario; the unit of parallel work."""
    scenario = generate_scenario(seed.stream("scenario", s_idx))
    scores = np.zeros(len(kinds))
    partials = {}
    for k, kind in enumerate(kinds):
        acc = CurveAccumulator(horizon) if collect_curves else None
        total = 0.0
        for r_idx in range(runs):
            final, curve = _mdp_run_final(kind, scenario, seed, s_idx, r_idx, horizon)
            total += final
            if acc is not None:
                acc.add(curve)
        scores[k] = total / runs
        if acc is not None:
            partials[AgentKind.parse(kind).value] = acc
    return scores, partials


def run_mdp_tournament(
    kinds,
    seed,
    n_scenarios: int = 100,
    runs_per_scenario: int = 20,
    horizon: int = 500,
    collect_curves: bool = False,
    n_jobs: int = 1,
) -> TournamentResult:
    """All-pairs tournament over freshly generated scenarios.

    Every competitor plays every scenario with the same arm payout streams;
    a scenario's winner between two kinds is the higher mean final score over
    its runs.  ``seed`` may be a RunSeed or a plain master integer.
    """
    if not isinstance(seed, RunSeed):
        seed = RunSeed(seed)
    kinds = [AgentKind.parse(k) for k in kinds]
    if len(set(kinds)) != len(kinds):
        raise ValueError("duplicate agent kinds in tournament")
    if n_scenarios < 1 or runs_per_scenario < 1:
        raise ValueError("n_scenarios and runs_per_scenario must be >= 1")
    if n_jobs == 1:
        blocks = [
            _scenario_block(kinds, seed, s, runs_per_scenario, horizon, collect_curves)
            for s in range(n_scenarios)
        ]
    else:
        blocks = Parallel(n_jobs=n_jobs)(
            delayed(_scenario_block)(kinds, seed, s, runs_per_scenario, horizon, collect_curves)
            for s in range(n_scenarios)
        )
    finals = np.stack([scores for scores, _ in blocks], axis=1)
    curves = None
    if collect_curves:
        curves = {}
        for _, partials in blocks:
            for label, acc in partials.items():
                if label in curves:
                    curves[label].merge(acc)
                else:
                    curves[label] = acc
    return aggregate(kinds, finals, curves)


@dataclass
class PairwiseOutcome:
    """Head-to-head record of two kinds over a set of scenarios."""

    kind_x: str
    kind_y: str
    wins_x: int
    wins_y: int
    ties: int

    @property
    def n_scenarios(self) -> int:
        return self.wins_x + self.wins_y + self.ties


def pairwise_compare(
    kind_x,
    kind_y,
    seed,
    n_scenarios: int = 100,
    runs_per_scenario: int = 20,
    horizon: int = 500,
) -> PairwiseOutcome:
    """Head-to-head scenario record between two kinds under shared randomness.

    The same kind on both sides faces identical draws and identical
    exploration, so every scenario is an exact tie.
    """
    x = AgentKind.parse(kind_x)
    y = AgentKind.parse(kind_y)
    if not isinstance(seed, RunSeed):
        seed = RunSeed(seed)
    kinds = [x] if x is y else [x, y]
    wins_x = wins_y = ties = 0
    for s in range(n_scenarios):
        scores, _ = _scenario_block(kinds, seed, s, runs_per_scenario, horizon, False)
        score_x = scores[0]
        score_y = scores[0] if x is y else scores[1]
        if score_x > score_y:
            wins_x += 1
        elif score_y > score_x:
            wins_y += 1
        else:
            ties += 1
    return PairwiseOutcome(x.value, y.value, wins_x, wins_y, ties)
