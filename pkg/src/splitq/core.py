"""Shared primitives: reward pairs, hyperparameters, value tables, seeding.

Everything downstream (agents, environments, tournaments) is built on the
types in this module.  The central convention is that rewards travel as a
*pair* of streams, gains in one and losses in the other, so that agents can
weigh and remember the two sides of an outcome differently.
"""

import math
import zlib
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

__all__ = [
    "RewardPair",
    "ZERO_REWARD",
    "split_reward",
    "AgentParams",
    "RowTable",
    "QTables",
    "LinearQFunction",
    "RunSeed",
    "polynomial_learning_rate",
    "epsilon_greedy",
]


@dataclass(frozen=True)
class RewardPair:
    """One two-stream reward observation.

    ``pos`` holds the gain component (>= 0) and ``neg`` the loss component
    (<= 0).  The sign convention is enforced at construction; a violation
    anywhere in the pipeline is a routing bug, not recoverable data.
    """

    pos: float
    neg: float

    def __post_init__(self):
        if not (math.isfinite(self.pos) and math.isfinite(self.neg)):
            raise ValueError(f"non-finite reward pair ({self.pos!r}, {self.neg!r})")
        if self.pos < 0.0 or self.neg > 0.0:
            raise ValueError(
                f"stream sign violation: pos={self.pos!r} must be >= 0, "
                f"neg={self.neg!r} must be <= 0"
            )

    @property
    def combined(self) -> float:
        """Scalar reward seen by agents that do not split streams."""
        return self.pos + self.neg


ZERO_REWARD = RewardPair(0.0, 0.0)


def split_reward(reward: float) -> RewardPair:
    """Route a scalar reward into (gain, loss) streams by sign.

    Exactly one stream is nonzero unless the reward is zero, and
    ``split_reward(r).combined == r`` for every finite ``r``.
    """
    if not math.isfinite(reward):
        raise ValueError(f"cannot split non-finite reward {reward!r}")
    if reward >= 0.0:
        return RewardPair(reward, 0.0)
    return RewardPair(0.0, reward)


@dataclass(frozen=True)
class AgentParams:
    """Hyperparameters shared by every agent.

    The four bias parameters follow the split update rule: ``lambda_pos`` /
    ``lambda_neg`` discount the stored estimate of each stream before the
    update is applied, ``w_pos`` / ``w_neg`` scale the incoming reward of
    each stream.  All four must be nonnegative; (1, 1, 1, 1) recovers
    ordinary Q-learning behaviour on each stream.
    """

    lambda_pos: float = 1.0
    w_pos: float = 1.0
    lambda_neg: float = 1.0
    w_neg: float = 1.0
    gamma: float = 0.95
    epsilon: float = 0.05
    lr_exponent: float = 0.8

    def __post_init__(self):
        for name in ("lambda_pos", "w_pos", "lambda_neg", "w_neg"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma!r}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon!r}")
        if not self.lr_exponent > 0.0:
            raise ValueError(f"lr_exponent must be > 0, got {self.lr_exponent!r}")


class RowTable:
    """Mapping from state to a per-action value row, zero-initialised.

    Rows are created lazily the first time a state is touched, sized by the
    action count supplied at that moment.  States only need to be hashable;
    environments with different action counts per state are supported because
    each row carries its own length.
    """

    def __init__(self, dtype=float):
        self._rows: dict[Any, np.ndarray] = {}
        self._dtype = dtype

    def row(self, state, n_actions: Optional[int] = None) -> np.ndarray:
        """Return the row for ``state``, creating it when ``n_actions`` is given."""
        existing = self._rows.get(state)
        if existing is not None:
            return existing
        if n_actions is None:
            raise KeyError(f"no row for state {state!r} and no action count supplied")
        if n_actions < 1:
            raise ValueError(f"n_actions must be >= 1, got {n_actions}")
        fresh = np.zeros(n_actions, dtype=self._dtype)
        self._rows[state] = fresh
        return fresh

    def value(self, state, action) -> float:
        return float(self.row(state)[action])

    def max_value(self, state, default: float = 0.0) -> float:
        """Greedy value of ``state``; unseen states report ``default`` (zero init)."""
        existing = self._rows.get(state)
        if existing is None:
            return default
        return float(existing.max())

    def states(self):
        return self._rows.keys()

    def __contains__(self, state) -> bool:
        return state in self._rows

    def __len__(self) -> int:
        return len(self._rows)


@dataclass
class QTables:
    """Tabular value storage for a split agent.

    ``positive`` and ``negative`` hold the per-stream estimates; ``visits``
    counts updates per (state, action) and is shared by both streams, so a
    split update advances the learning-rate schedule once, not twice.
    Unsplit agents use ``positive`` alone and ignore ``negative``.
    """

    positive: RowTable = field(default_factory=RowTable)
    negative: RowTable = field(default_factory=RowTable)
    visits: RowTable = field(default_factory=lambda: RowTable(dtype=np.int64))

    def combined_row(self, state, n_actions: Optional[int] = None) -> np.ndarray:
        return self.positive.row(state, n_actions) + self.negative.row(state, n_actions)

    def bump_visit(self, state, action, n_actions: Optional[int] = None) -> int:
        """Count one update of (state, action) and return the new total."""
        row = self.visits.row(state, n_actions)
        row[action] += 1
        return int(row[action])


@dataclass
class LinearQFunction:
    """Two-stream linear value function Q(s, a) = theta . psi(s, a).

    ``feature_extractor`` maps (state, action) to a vector of length
    ``feature_dim``.  Each stream owns a weight vector; unsplit use keeps
    ``theta_neg`` at zero and reads the combined value.
    """

    feature_extractor: Callable[[Any, Any], np.ndarray]
    feature_dim: int
    theta_pos: np.ndarray = None
    theta_neg: np.ndarray = None

    def __post_init__(self):
        if self.feature_dim < 1:
            raise ValueError(f"feature_dim must be >= 1, got {self.feature_dim}")
        if self.theta_pos is None:
            self.theta_pos = np.zeros(self.feature_dim)
        if self.theta_neg is None:
            self.theta_neg = np.zeros(self.feature_dim)
        for theta in (self.theta_pos, self.theta_neg):
            if theta.shape != (self.feature_dim,):
                raise ValueError(
                    f"weight shape {theta.shape} does not match feature_dim {self.feature_dim}"
                )

    def features(self, state, action) -> np.ndarray:
        psi = np.asarray(self.feature_extractor(state, action), dtype=float)
        if psi.shape != (self.feature_dim,):
            raise ValueError(
                f"feature extractor returned shape {psi.shape}, expected ({self.feature_dim},)"
            )
        if not np.all(np.isfinite(psi)):
            raise ValueError("feature extractor returned non-finite values")
        return psi

    def q_pos(self, state, action, psi: Optional[np.ndarray] = None) -> float:
        if psi is None:
            psi = self.features(state, action)
        return float(self.theta_pos @ psi)

    def q_neg(self, state, action, psi: Optional[np.ndarray] = None) -> float:
        if psi is None:
            psi = self.features(state, action)
        return float(self.theta_neg @ psi)

    def q_combined(self, state, action, psi: Optional[np.ndarray] = None) -> float:
        if psi is None:
            psi = self.features(state, action)
        return float((self.theta_pos + self.theta_neg) @ psi)


def _path_word(part) -> int:
    """Map one path element to a nonnegative integer for seed derivation.

    Integers pass through unchanged; strings hash via crc32 so the same label
    always lands on the same stream regardless of platform or process.
    """
    if isinstance(part, (bool, float)):
        raise TypeError(f"seed path elements must be int or str, got {part!r}")
    if isinstance(part, (int, np.integer)):
        if part < 0:
            raise ValueError(f"seed path integers must be >= 0, got {part!r}")
        return int(part)
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    raise TypeError(f"seed path elements must be int or str, got {part!r}")


@dataclass(frozen=True)
class RunSeed:
    """A master seed plus a scheme for deriving independent named streams.

    ``stream("env", scenario, run)`` and ``stream("explore", scenario, run)``
    return generators that never share draws, so consuming more randomness in
    one place cannot shift results computed elsewhere.  Streams are Philox
    (counter-based), so derivation order is irrelevant: any process that asks
    for the same path gets the same stream.
    """

    master: int

    def __post_init__(self):
        if not isinstance(self.master, (int, np.integer)):
            raise TypeError(f"master seed must be an int, got {self.master!r}")
        if not 0 <= int(self.master) < 2**64:
            raise ValueError(f"master seed must fit in an unsigned 64-bit int, got {self.master!r}")

    def stream(self, *path) -> np.random.Generator:
        """Derive the generator addressed by ``path`` (role first, then indices)."""
        key = tuple(_path_word(part) for part in path)
        seq = np.random.SeedSequence(entropy=int(self.master), spawn_key=key)
        return np.random.Generator(np.random.Philox(seq))


def polynomial_learning_rate(visits: int, exponent: float = 0.8) -> float:
    """Step size 1 / visits**exponent for the update counted by ``visits``.

    ``visits`` must already include the update being applied, so the very
    first update of a (state, action) pair sees visits=1 and a step size of
    exactly 1.0.
    """
    if visits < 1:
        raise ValueError(f"visits must count the current update (>= 1), got {visits}")
    if not exponent > 0.0:
        raise ValueError(f"exponent must be > 0, got {exponent!r}")
    return float(visits) ** -exponent


def epsilon_greedy(action_values, epsilon: float, rng: np.random.Generator) -> int:
    """Pick an action index from ``action_values`` with epsilon-greedy exploration.

    Draws exactly one uniform and one integer from ``rng`` on every call, so
    two agents sharing identical value rows and identical generator states
    stay in lockstep.  Greedy ties are broken uniformly at random.
    """
    values = np.asarray(action_values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError(f"action_values must be a non-empty vector, got shape {values.shape}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon!r}")
    explore = rng.random() < epsilon
    if explore:
        return int(rng.integers(values.size))
    best = np.flatnonzero(values == values.max())
    return int(best[rng.integers(best.size)])
