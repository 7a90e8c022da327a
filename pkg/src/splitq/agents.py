"""Learning agents: classic baselines, the split-Q family, and reward-bias presets.

Update rules live in module-level functions operating on plain tables so they
can be tested in isolation; the agent classes wire those rules to an
epsilon-greedy action loop with a shared per-(state, action) visit schedule.

All agents expose the same surface:

    act(state, n_actions) -> action index
    observe(state, action, reward, next_state, n_next) -> None
    begin_episode() -> None

``next_state`` is None for a terminal transition, in which case the bootstrap
term is zero.  ``reward`` is always a RewardPair; unsplit agents read
``reward.combined``.
"""

from dataclasses import replace
from enum import Enum
from typing import Optional

import numpy as np

from .core import (
    AgentParams,
    LinearQFunction,
    QTables,
    RewardPair,
    RowTable,
    epsilon_greedy,
    polynomial_learning_rate,
)

__all__ = [
    "AgentKind",
    "PRESET_TABLE",
    "MENTAL_KINDS",
    "STANDARD_KINDS",
    "preset_params",
    "ql_update",
    "dql_update",
    "sarsa_update",
    "sql_update",
    "sql_select",
    "sql2_update",
    "sql2_select",
    "maxpain_update",
    "maxpain_select",
    "linear_update",
    "Agent",
    "QLAgent",
    "DQLAgent",
    "SarsaAgent",
    "SplitQAgent",
    "Sql2Agent",
    "MaxPainAgent",
    "LinearQLAgent",
    "LinearDQLAgent",
    "LinearSarsaAgent",
    "LinearSplitAgent",
    "LinearSql2Agent",
    "LinearMaxPainAgent",
    "make_agent",
]


class AgentKind(str, Enum):
    """Every selectable algorithm, including the reward-bias presets."""

    QL = "QL"
    DQL = "DQL"
    SARSA = "SARSA"
    MP = "MP"
    SQL = "SQL"
    SQL2 = "SQL2"
    PQL = "PQL"
    NQL = "NQL"
    ADD = "ADD"
    ADHD = "ADHD"
    AD = "AD"
    CP = "CP"
    BVFTD = "bvFTD"
    PD = "PD"
    M = "M"

    @classmethod
    def parse(cls, name: str) -> "AgentKind":
        """Case-insensitive lookup by label, with a helpful error."""
        if isinstance(name, cls):
            return name
        for kind in cls:
            if kind.value.lower() == str(name).lower():
                return kind
        known = ", ".join(k.value for k in cls)
        raise ValueError(f"unknown agent kind {name!r}; known kinds: {known}")


# (mean, halfwidth) of the uniform sampling interval for each bias parameter,
# in the order (lambda_pos, w_pos, lambda_neg, w_neg).  A halfwidth of zero
# means the parameter is fixed.  Baselines that ignore the bias parameters
# carry the neutral row so preset_params works uniformly for every kind.
_NEUTRAL = ((1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0))

PRESET_TABLE: dict[AgentKind, tuple] = {
    AgentKind.QL: _NEUTRAL,
    AgentKind.DQL: _NEUTRAL,
    AgentKind.SARSA: _NEUTRAL,
    AgentKind.MP: _NEUTRAL,
    AgentKind.SQL: _NEUTRAL,
    AgentKind.SQL2: _NEUTRAL,
    # PQL/NQL follow a knockout naming: the named stream's parameters are the
    # zeroed ones.  PQL knocks out the positive stream and learns only from
    # losses; NQL knocks out the negative stream and learns only from gains.
    # A knocked-out table stays identically zero from zero initialization.
    AgentKind.PQL: ((0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (1.0, 0.0)),
    AgentKind.NQL: ((1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)),
    AgentKind.ADD: ((1.0, 0.1), (1.0, 0.1), (0.5, 0.1), (1.0, 0.1)),
    AgentKind.ADHD: ((0.2, 0.1), (1.0, 0.1), (0.2, 0.1), (1.0, 0.1)),
    AgentKind.AD: ((0.1, 0.1), (1.0, 0.1), (0.1, 0.1), (1.0, 0.1)),
    AgentKind.CP: ((0.5, 0.1), (0.5, 0.1), (1.0, 0.1), (1.0, 0.1)),
    AgentKind.BVFTD: ((0.5, 0.1), (100.0, 10.0), (0.5, 0.1), (1.0, 0.1)),
    AgentKind.PD: ((0.5, 0.1), (1.0, 0.1), (0.5, 0.1), (100.0, 10.0)),
    AgentKind.M: ((0.5, 0.1), (1.0, 0.1), (0.5, 0.1), (1.0, 0.1)),
}

MENTAL_KINDS = (
    AgentKind.ADD,
    AgentKind.ADHD,
    AgentKind.AD,
    AgentKind.CP,
    AgentKind.BVFTD,
    AgentKind.PD,
    AgentKind.M,
)

STANDARD_KINDS = (
    AgentKind.QL,
    AgentKind.DQL,
    AgentKind.SARSA,
    AgentKind.SQL,
    AgentKind.SQL2,
    AgentKind.MP,
    AgentKind.PQL,
    AgentKind.NQL,
)


def preset_params(
    kind, rng: Optional[np.random.Generator] = None, **overrides
) -> AgentParams:
    """Instantiate the four bias parameters for ``kind``.

    Noisy presets draw each parameter uniformly from mean +/- halfwidth and
    clamp at zero, so they need ``rng``; deterministic presets do not.  The
    memory factors are additionally capped at 1: they discount previously
    accumulated value, and a factor above 1 compounds the stored table
    geometrically once the learning rate decays below the excess, which
    destroys rather than biases learning.  Extra keyword arguments (gamma,
    epsilon, lr_exponent) pass through to AgentParams.
    """
    kind = AgentKind.parse(kind)
    row = PRESET_TABLE[kind]
    sampled = []
    for position, (mean, halfwidth) in enumerate(row):
        if halfwidth == 0.0:
            sampled.append(mean)
            continue
        if rng is None:
            raise ValueError(f"preset {kind.value} samples its parameters; rng is required")
        value = max(0.0, mean + halfwidth * (2.0 * rng.random() - 1.0))
        if position in (0, 2):  # memory factors lambda+-, not the reward weights
            value = min(1.0, value)
        sampled.append(value)
    lambda_pos, w_pos, lambda_neg, w_neg = sampled
    return AgentParams(
        lambda_pos=lambda_pos, w_pos=w_pos, lambda_neg=lambda_neg, w_neg=w_neg, **overrides
    )


# ---------------------------------------------------------------------------
# Tabular update rules
# ---------------------------------------------------------------------------


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")


def ql_update(
    table: RowTable,
    state,
    action,
    reward: float,
    next_state,
    alpha: float,
    gamma: float,
    n_next: Optional[int] = None,
) -> None:
    """One Q-learning backup on a single table; ``next_state=None`` is terminal."""
    _check_alpha(alpha)
    row = table.row(state)
    bootstrap = 0.0 if next_state is None else table.row(next_state, n_next).max()
    row[action] += alpha * (reward + gamma * bootstrap - row[action])


def dql_update(
    table_a: RowTable,
    table_b: RowTable,
    state,
    action,
    reward: float,
    next_state,
    alpha: float,
    gamma: float,
    rng: np.random.Generator,
    n_next: Optional[int] = None,
) -> None:
    """Double-estimator backup: a fair coin picks which table learns.

    The learning table supplies the argmax over next actions, the other table
    evaluates it, which removes the single-estimator maximisation bias.
    Exactly one of the two tables changes per call.
    """
    _check_alpha(alpha)
    if rng.random() < 0.5:
        learner, evaluator = table_a, table_b
    else:
        learner, evaluator = table_b, table_a
    row = learner.row(state)
    if next_state is None:
        target = reward
    else:
        best = int(np.argmax(learner.row(next_state, n_next)))
        target = reward + gamma * evaluator.row(next_state, n_next)[best]
    row[action] += alpha * (target - row[action])


def sarsa_update(
    table: RowTable,
    state,
    action,
    reward: float,
    next_state,
    next_action,
    alpha: float,
    gamma: float,
    n_next: Optional[int] = None,
) -> None:
    """On-policy backup toward the action actually chosen at ``next_state``."""
    _check_alpha(alpha)
    row = table.row(state)
    if next_state is None:
        bootstrap = 0.0
    else:
        bootstrap = float(table.row(next_state, n_next)[next_action])
    row[action] += alpha * (reward + gamma * bootstrap - row[action])


def sql_update(
    tables: QTables,
    params: AgentParams,
    state,
    action,
    reward: RewardPair,
    next_state,
    alpha: float,
    n_next: Optional[int] = None,
) -> None:
    """Split backup: each stream decays its memory by lambda and learns from
    its own weighted reward plus its own greedy bootstrap.

    With lambda = w = 1 on both streams this is plain Q-learning applied to
    each stream separately.  Zeroed streams (lambda = w = 0) stay at exactly
    zero forever because every term of the update carries a zero factor.
    """
    _check_alpha(alpha)
    q_pos = tables.positive.row(state)
    q_neg = tables.negative.row(state)
    if next_state is None:
        boot_pos = 0.0
        boot_neg = 0.0
    else:
        boot_pos = tables.positive.row(next_state, n_next).max()
        boot_neg = tables.negative.row(next_state, n_next).max()
    gamma = params.gamma
    q_pos[action] = params.lambda_pos * q_pos[action] + alpha * (
        params.w_pos * reward.pos + gamma * boot_pos - q_pos[action]
    )
    q_neg[action] = params.lambda_neg * q_neg[action] + alpha * (
        params.w_neg * reward.neg + gamma * boot_neg - q_neg[action]
    )


def sql_select(
    tables: QTables,
    epsilon: float,
    state,
    n_actions: int,
    rng: np.random.Generator,
) -> int:
    """Epsilon-greedy over the unweighted sum of the two stream tables."""
    values = tables.positive.row(state, n_actions) + tables.negative.row(state, n_actions)
    return epsilon_greedy(values, epsilon, rng)


def sql2_update(
    tables: QTables,
    params: AgentParams,
    state,
    action,
    reward: RewardPair,
    next_state,
    alpha: float,
    n_next: Optional[int] = None,
) -> None:
    """Variant split backup with raw rewards; the weights move to selection."""
    _check_alpha(alpha)
    q_pos = tables.positive.row(state)
    q_neg = tables.negative.row(state)
    if next_state is None:
        boot_pos = 0.0
        boot_neg = 0.0
    else:
        boot_pos = tables.positive.row(next_state, n_next).max()
        boot_neg = tables.negative.row(next_state, n_next).max()
    gamma = params.gamma
    q_pos[action] = params.lambda_pos * q_pos[action] + alpha * (
        reward.pos + gamma * boot_pos - q_pos[action]
    )
    q_neg[action] = params.lambda_neg * q_neg[action] + alpha * (
        reward.neg + gamma * boot_neg - q_neg[action]
    )


def sql2_select(
    tables: QTables,
    params: AgentParams,
    state,
    n_actions: int,
    rng: np.random.Generator,
) -> int:
    """Epsilon-greedy over the w-weighted sum of the two stream tables."""
    values = params.w_pos * tables.positive.row(state, n_actions) + params.w_neg * tables.negative.row(
        state, n_actions
    )
    return epsilon_greedy(values, params.epsilon, rng)


def maxpain_update(
    tables: QTables,
    state,
    action,
    reward: RewardPair,
    next_state,
    alpha: float,
    gamma: float,
    n_next: Optional[int] = None,
) -> None:
    """Backup for the reward/pain decomposition.

    ``tables.positive`` learns gains as usual.  ``tables.negative`` here
    stores *pain magnitudes* (>= 0): it learns from the absolute value of the
    loss stream and bootstraps with max, i.e. it estimates the worst pain
    reachable from the next state rather than the least.
    """
    _check_alpha(alpha)
    q_reward = tables.positive.row(state)
    q_pain = tables.negative.row(state)
    if next_state is None:
        boot_reward = 0.0
        boot_pain = 0.0
    else:
        boot_reward = tables.positive.row(next_state, n_next).max()
        boot_pain = tables.negative.row(next_state, n_next).max()
    q_reward[action] += alpha * (reward.pos + gamma * boot_reward - q_reward[action])
    q_pain[action] += alpha * (-reward.neg + gamma * boot_pain - q_pain[action])


def maxpain_select(
    tables: QTables,
    epsilon: float,
    mixing: float,
    state,
    n_actions: int,
    rng: np.random.Generator,
) -> int:
    """Epsilon-greedy over mixing * reward - (1 - mixing) * pain."""
    if not 0.0 <= mixing <= 1.0:
        raise ValueError(f"mixing must lie in [0, 1], got {mixing!r}")
    values = mixing * tables.positive.row(state, n_actions) - (1.0 - mixing) * tables.negative.row(
        state, n_actions
    )
    return epsilon_greedy(values, epsilon, rng)


# ---------------------------------------------------------------------------
# Linear function approximation
# ---------------------------------------------------------------------------


def linear_update(
    fn: LinearQFunction,
    params: AgentParams,
    state,
    action,
    reward: RewardPair,
    next_state,
    next_actions,
    alpha: float,
    split: bool = True,
) -> None:
    """Gradient-style weight update for a linear value function.

    In split mode each stream moves its weights along psi(s, a) by
    ``(lambda - 1) * q_hat + alpha * (w * r + gamma * boot - q_hat)``, which
    under one-hot features reproduces the tabular split backup exactly:
    the lambda decay of the stored entry and the learning step both land on
    the single active weight.  In unsplit mode only ``theta_pos`` learns,
    from the combined reward, which is plain approximate Q-learning.

    ``next_actions`` is the iterable of actions available at ``next_state``
    and is ignored when ``next_state`` is None (terminal).
    """
    _check_alpha(alpha)
    psi = fn.features(state, action)
    gamma = params.gamma
    if next_state is None:
        next_psis = []
    else:
        next_psis = [fn.features(next_state, a_next) for a_next in next_actions]
        if not next_psis:
            raise ValueError("next_actions must be non-empty for a non-terminal transition")
    if split:
        q_pos = float(fn.theta_pos @ psi)
        q_neg = float(fn.theta_neg @ psi)
        if next_psis:
            boot_pos = max(float(fn.theta_pos @ p) for p in next_psis)
            boot_neg = max(float(fn.theta_neg @ p) for p in next_psis)
        else:
            boot_pos = 0.0
            boot_neg = 0.0
        step_pos = (params.lambda_pos - 1.0) * q_pos + alpha * (
            params.w_pos * reward.pos + gamma * boot_pos - q_pos
        )
        step_neg = (params.lambda_neg - 1.0) * q_neg + alpha * (
            params.w_neg * reward.neg + gamma * boot_neg - q_neg
        )
        fn.theta_pos += step_pos * psi
        fn.theta_neg += step_neg * psi
    else:
        theta = fn.theta_pos + fn.theta_neg
        q_here = float(theta @ psi)
        if next_psis:
            bootstrap = max(float(theta @ p) for p in next_psis)
        else:
            bootstrap = 0.0
        fn.theta_pos += alpha * (reward.combined + gamma * bootstrap - q_here) * psi


# ---------------------------------------------------------------------------
# Agent classes
# ---------------------------------------------------------------------------


class Agent:
    """Common action loop: epsilon-greedy over subclass-defined action values."""

    def __init__(self, kind, params: AgentParams, rng: np.random.Generator):
        self.kind = AgentKind.parse(kind)
        self.params = params
        self.rng = rng

    def act(self, state, n_actions: int) -> int:
        return epsilon_greedy(self.action_values(state, n_actions), self.params.epsilon, self.rng)

    def action_values(self, state, n_actions: int) -> np.ndarray:
        raise NotImplementedError

    def observe(self, state, action, reward: RewardPair, next_state, n_next: int) -> None:
        raise NotImplementedError

    def begin_episode(self) -> None:
        """Reset per-episode carry-over (most agents have none)."""


class TabularAgent(Agent):
    """Shared table storage and the polynomial step-size schedule."""

    def __init__(self, kind, params, rng):
        super().__init__(kind, params, rng)
        self.tables = QTables()

    def _alpha_for_update(self, state, action, n_actions: int) -> float:
        """Advance the shared visit count for (state, action) and return alpha."""
        count = self.tables.bump_visit(state, action, n_actions)
        return polynomial_learning_rate(count, self.params.lr_exponent)


class QLAgent(TabularAgent):
    """Single-table Q-learning on the combined reward."""

    def action_values(self, state, n_actions):
        return self.tables.positive.row(state, n_actions)

    def observe(self, state, action, reward, next_state, n_next):
        alpha = self._alpha_for_update(state, action, len(self.tables.positive.row(state)))
        ql_update(
            self.tables.positive,
            state,
            action,
            reward.combined,
            next_state,
            alpha,
            self.params.gamma,
            n_next,
        )


class DQLAgent(TabularAgent):
    """Double Q-learning; acts on the sum of its two estimators.

    Reuses ``tables.positive`` / ``tables.negative`` as the two estimators
    (they are independent value tables here, not reward streams) so the visit
    schedule plumbing is shared with every other tabular agent.
    """

    def action_values(self, state, n_actions):
        return self.tables.combined_row(state, n_actions)

    def observe(self, state, action, reward, next_state, n_next):
        alpha = self._alpha_for_update(state, action, len(self.tables.positive.row(state)))
        dql_update(
            self.tables.positive,
            self.tables.negative,
            state,
            action,
            reward.combined,
            next_state,
            alpha,
            self.params.gamma,
            self.rng,
            n_next,
        )


class SarsaAgent(TabularAgent):
    """On-policy SARSA; commits to the next action inside ``observe``."""

    def __init__(self, kind, params, rng):
        super().__init__(kind, params, rng)
        self._pending = None

    def begin_episode(self):
        self._pending = None

    def action_values(self, state, n_actions):
        return self.tables.positive.row(state, n_actions)

    def act(self, state, n_actions):
        if self._pending is not None:
            action = self._pending
            self._pending = None
            return action
        return super().act(state, n_actions)

    def observe(self, state, action, reward, next_state, n_next):
        alpha = self._alpha_for_update(state, action, len(self.tables.positive.row(state)))
        if next_state is None:
            next_action = None
        else:
            next_action = epsilon_greedy(
                self.tables.positive.row(next_state, n_next), self.params.epsilon, self.rng
            )
            self._pending = next_action
        sarsa_update(
            self.tables.positive,
            state,
            action,
            reward.combined,
            next_state,
            next_action,
            alpha,
            self.params.gamma,
            n_next,
        )


class SplitQAgent(TabularAgent):
    """Two-stream agent: split backups, selection on the unweighted sum.

    Covers the neutral split learner, the single-stream ablations (one stream
    pinned at zero), and every reward-bias preset; they differ only in the
    four bias parameters.
    """

    def action_values(self, state, n_actions):
        return self.tables.combined_row(state, n_actions)

    def act(self, state, n_actions):
        return sql_select(self.tables, self.params.epsilon, state, n_actions, self.rng)

    def observe(self, state, action, reward, next_state, n_next):
        alpha = self._alpha_for_update(state, action, len(self.tables.positive.row(state)))
        sql_update(self.tables, self.params, state, action, reward, next_state, alpha, n_next)


class Sql2Agent(SplitQAgent):
    """Variant split agent: raw-reward backups, w-weighted selection."""

    def act(self, state, n_actions):
        return sql2_select(self.tables, self.params, state, n_actions, self.rng)

    def observe(self, state, action, reward, next_state, n_next):
        alpha = self._alpha_for_update(state, action, len(self.tables.positive.row(state)))
        sql2_update(self.tables, self.params, state, action, reward, next_state, alpha, n_next)


class MaxPainAgent(TabularAgent):
    """Reward/pain agent; ``tables.negative`` stores pain magnitudes (>= 0)."""

    def __init__(self, kind, params, rng, mixing: float = 0.5):
        super().__init__(kind, params, rng)
        if not 0.0 <= mixing <= 1.0:
            raise ValueError(f"mixing must lie in [0, 1], got {mixing!r}")
        self.mixing = mixing

    def action_values(self, state, n_actions):
        return self.mixing * self.tables.positive.row(state, n_actions) - (
            1.0 - self.mixing
        ) * self.tables.negative.row(state, n_actions)

    def observe(self, state, action, reward, next_state, n_next):
        alpha = self._alpha_for_update(state, action, len(self.tables.positive.row(state)))
        maxpain_update(
            self.tables, state, action, reward, next_state, alpha, self.params.gamma, n_next
        )


class LinearAgent(Agent):
    """Shared plumbing for the approximate agents: weights plus a constant step."""

    def __init__(self, kind, params, rng, fn: LinearQFunction, alpha: float = 0.2):
        super().__init__(kind, params, rng)
        _check_alpha(alpha)
        self.fn = fn
        self.alpha = alpha

    def action_values(self, state, n_actions):
        return np.array(
            [self.fn.q_combined(state, action) for action in range(n_actions)]
        )


class LinearQLAgent(LinearAgent):
    """Approximate Q-learning on the combined reward."""

    def observe(self, state, action, reward, next_state, n_next):
        next_actions = None if next_state is None else range(n_next)
        linear_update(
            self.fn, self.params, state, action, reward, next_state, next_actions,
            self.alpha, split=False,
        )


class LinearDQLAgent(LinearAgent):
    """Approximate double Q-learning with two weight vectors."""

    def __init__(self, kind, params, rng, fn, alpha=0.2):
        super().__init__(kind, params, rng, fn, alpha)
        self.theta_a = np.zeros(fn.feature_dim)
        self.theta_b = np.zeros(fn.feature_dim)

    def action_values(self, state, n_actions):
        theta = self.theta_a + self.theta_b
        return np.array(
            [float(theta @ self.fn.features(state, action)) for action in range(n_actions)]
        )

    def observe(self, state, action, reward, next_state, n_next):
        if self.rng.random() < 0.5:
            learner, evaluator = self.theta_a, self.theta_b
        else:
            learner, evaluator = self.theta_b, self.theta_a
        psi = self.fn.features(state, action)
        if next_state is None:
            target = reward.combined
        else:
            next_psis = [self.fn.features(next_state, a) for a in range(n_next)]
            scores = [float(learner @ p) for p in next_psis]
            best = int(np.argmax(scores))
            target = reward.combined + self.params.gamma * float(evaluator @ next_psis[best])
        learner += self.alpha * (target - float(learner @ psi)) * psi


class LinearSarsaAgent(LinearAgent):
    """Approximate SARSA with the same pending-action handoff as the tabular one."""

    def __init__(self, kind, params, rng, fn, alpha=0.2):
        super().__init__(kind, params, rng, fn, alpha)
        self._pending = None

    def begin_episode(self):
        self._pending = None

    def action_values(self, state, n_actions):
        return np.array(
            [self.fn.q_combined(state, action) for action in range(n_actions)]
        )

    def act(self, state, n_actions):
        if self._pending is not None:
            action = self._pending
            self._pending = None
            return action
        return super().act(state, n_actions)

    def observe(self, state, action, reward, next_state, n_next):
        psi = self.fn.features(state, action)
        theta = self.fn.theta_pos + self.fn.theta_neg
        if next_state is None:
            bootstrap = 0.0
        else:
            next_action = epsilon_greedy(
                self.action_values(next_state, n_next), self.params.epsilon, self.rng
            )
            self._pending = next_action
            bootstrap = self.fn.q_combined(next_state, next_action)
        q_here = float(theta @ psi)
        delta = reward.combined + self.params.gamma * bootstrap - q_here
        self.fn.theta_pos += self.alpha * delta * psi


class LinearSplitAgent(LinearAgent):
    """Approximate split agent; selection on the unweighted combined value."""

    def observe(self, state, action, reward, next_state, n_next):
        next_actions = None if next_state is None else range(n_next)
        linear_update(
            self.fn, self.params, state, action, reward, next_state, next_actions,
            self.alpha, split=True,
        )


class LinearSql2Agent(LinearSplitAgent):
    """Approximate variant split agent; w-weighted selection, raw-reward backups."""

    def __init__(self, kind, params, rng, fn, alpha=0.2):
        super().__init__(kind, params, rng, fn, alpha)
        # The backup sees raw stream rewards; the w weights act at selection only.
        self._update_params = replace(params, w_pos=1.0, w_neg=1.0)

    def action_values(self, state, n_actions):
        p = self.params
        values = []
        for action in range(n_actions):
            psi = self.fn.features(state, action)
            values.append(p.w_pos * float(self.fn.theta_pos @ psi) + p.w_neg * float(self.fn.theta_neg @ psi))
        return np.array(values)

    def observe(self, state, action, reward, next_state, n_next):
        next_actions = None if next_state is None else range(n_next)
        linear_update(
            self.fn, self._update_params, state, action, reward, next_state, next_actions,
            self.alpha, split=True,
        )


class LinearMaxPainAgent(LinearAgent):
    """Approximate reward/pain agent; theta_neg weights estimate pain (>= 0)."""

    def __init__(self, kind, params, rng, fn, alpha=0.2, mixing: float = 0.5):
        super().__init__(kind, params, rng, fn, alpha)
        if not 0.0 <= mixing <= 1.0:
            raise ValueError(f"mixing must lie in [0, 1], got {mixing!r}")
        self.mixing = mixing

    def action_values(self, state, n_actions):
        values = []
        for action in range(n_actions):
            psi = self.fn.features(state, action)
            values.append(
                self.mixing * float(self.fn.theta_pos @ psi)
                - (1.0 - self.mixing) * float(self.fn.theta_neg @ psi)
            )
        return np.array(values)

    def observe(self, state, action, reward, next_state, n_next):
        psi = self.fn.features(state, action)
        if next_state is None:
            boot_reward = 0.0
            boot_pain = 0.0
        else:
            next_psis = [self.fn.features(next_state, a) for a in range(n_next)]
            boot_reward = max(float(self.fn.theta_pos @ p) for p in next_psis)
            boot_pain = max(float(self.fn.theta_neg @ p) for p in next_psis)
        gamma = self.params.gamma
        delta_reward = reward.pos + gamma * boot_reward - float(self.fn.theta_pos @ psi)
        delta_pain = -reward.neg + gamma * boot_pain - float(self.fn.theta_neg @ psi)
        self.fn.theta_pos += self.alpha * delta_reward * psi
        self.fn.theta_neg += self.alpha * delta_pain * psi


_SPLIT_FAMILY = set(MENTAL_KINDS) | {AgentKind.SQL, AgentKind.PQL, AgentKind.NQL}


def make_agent(
    kind,
    rng: np.random.Generator,
    params: Optional[AgentParams] = None,
    param_rng: Optional[np.random.Generator] = None,
    feature_extractor=None,
    feature_dim: Optional[int] = None,
    linear_alpha: float = 0.2,
    mixing: float = 0.5,
) -> Agent:
    """Build a ready-to-run agent of the requested kind.

    ``rng`` drives action selection (and the double-estimator coin);
    ``param_rng`` is consumed only by noisy presets.  When ``params`` is given
    it is used verbatim and no sampling happens.  Passing a
    ``feature_extractor`` plus ``feature_dim`` switches every kind to its
    linear-approximation variant with constant step ``linear_alpha``.
    """
    kind = AgentKind.parse(kind)
    if params is None:
        params = preset_params(kind, param_rng)
    linear = feature_extractor is not None
    if linear:
        if feature_dim is None:
            raise ValueError("feature_dim is required with a feature_extractor")

        def fresh_fn():
            return LinearQFunction(feature_extractor=feature_extractor, feature_dim=feature_dim)

        if kind is AgentKind.QL:
            return LinearQLAgent(kind, params, rng, fresh_fn(), linear_alpha)
        if kind is AgentKind.DQL:
            return LinearDQLAgent(kind, params, rng, fresh_fn(), linear_alpha)
        if kind is AgentKind.SARSA:
            return LinearSarsaAgent(kind, params, rng, fresh_fn(), linear_alpha)
        if kind is AgentKind.MP:
            return LinearMaxPainAgent(kind, params, rng, fresh_fn(), linear_alpha, mixing)
        if kind is AgentKind.SQL2:
            return LinearSql2Agent(kind, params, rng, fresh_fn(), linear_alpha)
        return LinearSplitAgent(kind, params, rng, fresh_fn(), linear_alpha)
    if kind is AgentKind.QL:
        return QLAgent(kind, params, rng)
    if kind is AgentKind.DQL:
        return DQLAgent(kind, params, rng)
    if kind is AgentKind.SARSA:
        return SarsaAgent(kind, params, rng)
    if kind is AgentKind.MP:
        return MaxPainAgent(kind, params, rng, mixing)
    if kind is AgentKind.SQL2:
        return Sql2Agent(kind, params, rng)
    assert kind in _SPLIT_FAMILY
    return SplitQAgent(kind, params, rng)
