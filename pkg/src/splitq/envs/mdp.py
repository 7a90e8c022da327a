"""Randomly generated two-armed decision MDPs with mixture-of-Gaussians rewards.

The chain has five states.  From the start state A the agent picks one of two
arms; each arm leads through an intermediate state (B or C) to its own
terminal (D or E), and the intermediate-to-terminal transition pays out a
fixed number of draws from that arm's two-component Gaussian mixture, sign
split into the two reward streams.  After a terminal the walk restarts at A,
so a fixed action budget covers many traversals.

Environments accept one generator per arm so that two agents given
identically seeded generators face identical payout sequences draw for draw.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import RewardPair, ZERO_REWARD

__all__ = ["MixtureSpec", "ScenarioSpec", "generate_scenario", "MdpEnv"]


@dataclass(frozen=True)
class MixtureSpec:
    """Two-component Gaussian mixture: N(mean1, sd1) w.p. ``p`` else N(mean2, sd2)."""

    mean1: float
    sd1: float
    mean2: float
    sd2: float
    p: float

    def __post_init__(self):
        if self.sd1 < 0.0 or self.sd2 < 0.0:
            raise ValueError(f"standard deviations must be >= 0, got {self.sd1!r}, {self.sd2!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"mixture weight must lie in [0, 1], got {self.p!r}")

    @property
    def mean(self) -> float:
        return self.p * self.mean1 + (1.0 - self.p) * self.mean2

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Sample ``n`` values; consumes exactly 3n draws from ``rng``."""
        pick_first = rng.random(n) < self.p
        first = rng.normal(self.mean1, self.sd1, n)
        second = rng.normal(self.mean2, self.sd2, n)
        return np.where(pick_first, first, second)

    def to_dict(self) -> dict:
        return {
            "mean1": self.mean1,
            "sd1": self.sd1,
            "mean2": self.mean2,
            "sd2": self.sd2,
            "p": self.p,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MixtureSpec":
        return cls(**data)


@dataclass(frozen=True)
class ScenarioSpec:
    """One generated task instance: a mixture per arm plus the payout size."""

    left: MixtureSpec
    right: MixtureSpec
    draws_per_visit: int = 50

    def __post_init__(self):
        if self.draws_per_visit < 1:
            raise ValueError(f"draws_per_visit must be >= 1, got {self.draws_per_visit}")

    def to_dict(self) -> dict:
        return {
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "draws_per_visit": self.draws_per_visit,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioSpec":
        return cls(
            left=MixtureSpec.from_dict(data["left"]),
            right=MixtureSpec.from_dict(data["right"]),
            draws_per_visit=int(data["draws_per_visit"]),
        )


def generate_scenario(rng: np.random.Generator, draws_per_visit: int = 50) -> ScenarioSpec:
    """Sample a fresh scenario: integer means in [-100, 100], integer sds in
    [0, 20], mixture weights uniform on [0, 1), independently per arm."""

    def sample_mixture() -> MixtureSpec:
        mean1, mean2 = (float(v) for v in rng.integers(-100, 101, size=2))
        sd1, sd2 = (float(v) for v in rng.integers(0, 21, size=2))
        return MixtureSpec(mean1=mean1, sd1=sd1, mean2=mean2, sd2=sd2, p=float(rng.random()))

    return ScenarioSpec(left=sample_mixture(), right=sample_mixture(), draws_per_visit=draws_per_visit)


def _sign_split(draws: np.ndarray) -> RewardPair:
    """Sum the positive and negative parts of a payout block into one pair."""
    pos = float(np.maximum(draws, 0.0).sum())
    neg = float(np.minimum(draws, 0.0).sum())
    return RewardPair(pos, neg)


class MdpEnv:
    """The five-state decision chain.

    States are the strings "A" (choice), "B"/"C" (arm passages) and "D"/"E"
    (terminals).  ``step`` is driven by the caller's current state, returns
    ``(next_state, RewardPair, done)``, and the caller restarts via ``reset``.

    ``left_rng`` / ``right_rng`` feed the payout draws of the respective arm.
    Keeping the arms on separate streams means the k-th visit to an arm pays
    the same block of draws no matter what the agent did elsewhere, which is
    what makes scores comparable across agents under a shared seed.

    With ``per_draw=True`` the payout block is metered out one draw per step
    at the terminal-side state instead of summed into a single pair; the
    cumulative reward of a traversal is identical in both modes.
    """

    STATES = ("A", "B", "C", "D", "E")

    def __init__(
        self,
        scenario: ScenarioSpec,
        left_rng: np.random.Generator,
        right_rng: np.random.Generator,
        per_draw: bool = False,
    ):
        self.scenario = scenario
        self._arm_rng = {"B": left_rng, "C": right_rng}
        self.per_draw = per_draw
        self._queue: list[float] = []

    def reset(self) -> str:
        self._queue = []
        return "A"

    def n_actions(self, state: str) -> int:
        if state == "A":
            return 2
        if state in ("B", "C"):
            return 1
        if self.per_draw and state in ("D", "E"):
            return 1
        raise ValueError(f"state {state!r} is terminal or unknown; no actions available")

    def _payout(self, state: str) -> np.ndarray:
        mixture = self.scenario.left if state == "B" else self.scenario.right
        return mixture.draw(self._arm_rng[state], self.scenario.draws_per_visit)

    def step(self, state: str, action: int):
        if state == "A":
            if action not in (0, 1):
                raise ValueError(f"state A has actions 0 and 1, got {action!r}")
            return ("B" if action == 0 else "C"), ZERO_REWARD, False
        if state in ("B", "C"):
            if action != 0:
                raise ValueError(f"state {state} has the single action 0, got {action!r}")
            terminal = "D" if state == "B" else "E"
            draws = self._payout(state)
            if not self.per_draw:
                return terminal, _sign_split(draws), True
            self._queue = [float(v) for v in draws]
            return terminal, ZERO_REWARD, False
        if self.per_draw and state in ("D", "E"):
            if action != 0:
                raise ValueError(f"state {state} has the single action 0, got {action!r}")
            if not self._queue:
                raise ValueError(f"no payout pending at {state}; traversal already finished")
            value = self._queue.pop(0)
            pair = RewardPair(max(value, 0.0), min(value, 0.0))
            return state, pair, not self._queue
        raise ValueError(f"cannot step from state {state!r}")
