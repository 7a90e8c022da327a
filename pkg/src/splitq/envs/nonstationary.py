"""Episode-batched reward-stream perturbations wrapped around any environment.

At the start of every batch of episodes two independent fair coins decide
whether the gain stream (event A) and the loss stream (event B) are affected
for that whole batch.  Three transform families exist:

  muting    an affected stream is zeroed
  scaling   an affected stream is multiplied by 100
  flipping  an affected stream is negated, which moves its content onto the
            opposite stream (a negated gain is a loss and vice versa)

Transforms act on the reward pair the wrapped environment emits; the sign
convention (gains >= 0, losses <= 0) survives every transform.
"""

from enum import Enum

import numpy as np

from ..core import RewardPair

__all__ = ["NonstationarityMode", "SCALE_FACTOR", "apply_transform", "NonstationaryEnv"]

SCALE_FACTOR = 100.0


class NonstationarityMode(str, Enum):
    STATIONARY = "stationary"
    MUTING = "muting"
    SCALING = "scaling"
    FLIPPING = "flipping"

    @classmethod
    def parse(cls, name) -> "NonstationarityMode":
        if isinstance(name, cls):
            return name
        for mode in cls:
            if mode.value == str(name).lower():
                return mode
        known = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown nonstationarity mode {name!r}; known modes: {known}")


def apply_transform(
    pair: RewardPair,
    mode: NonstationarityMode,
    pos_active: bool,
    neg_active: bool,
) -> RewardPair:
    """Transform one reward pair under the current batch events.

    ``pos_active`` / ``neg_active`` say whether the gain / loss stream is
    affected this batch.  With both inactive (or stationary mode) the pair
    passes through unchanged.
    """
    mode = NonstationarityMode.parse(mode)
    if mode is NonstationarityMode.STATIONARY or not (pos_active or neg_active):
        return pair
    if mode is NonstationarityMode.MUTING:
        return RewardPair(
            0.0 if pos_active else pair.pos,
            0.0 if neg_active else pair.neg,
        )
    if mode is NonstationarityMode.SCALING:
        return RewardPair(
            pair.pos * SCALE_FACTOR if pos_active else pair.pos,
            pair.neg * SCALE_FACTOR if neg_active else pair.neg,
        )
    # Flipping: an affected stream's content is negated, so it changes sign
    # and belongs on the other stream; an unaffected stream stays put.
    pos_out = (0.0 if pos_active else pair.pos) + (-pair.neg if neg_active else 0.0)
    neg_out = (0.0 if neg_active else pair.neg) + (-pair.pos if pos_active else 0.0)
    return RewardPair(pos_out, neg_out)


class NonstationaryEnv:
    """Wraps an environment and perturbs its reward pairs batch by batch.

    The wrapped environment's interface (reset / step / n_actions) is
    preserved.  Batch bookkeeping counts episodes: every ``batch_size``
    resets, the two stream events are redrawn from ``rng`` as independent
    Bernoulli(0.5) coins.  Stationary mode never consumes randomness, so a
    stationary-wrapped run is draw-for-draw identical to the bare one.
    """

    def __init__(
        self,
        env,
        mode,
        rng: np.random.Generator,
        batch_size: int = 10,
    ):
        if batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {batch_size!r}")
        self.env = env
        self.mode = NonstationarityMode.parse(mode)
        self.rng = rng
        self.batch_size = batch_size
        self._episode = 0
        self.pos_active = False
        self.neg_active = False

    def on_batch_start(self) -> tuple:
        """Redraw the stream events; returns the new (pos_active, neg_active)."""
        if self.mode is not NonstationarityMode.STATIONARY:
            self.pos_active = bool(self.rng.random() < 0.5)
            self.neg_active = bool(self.rng.random() < 0.5)
        return self.pos_active, self.neg_active

    def reset(self):
        if self._episode % self.batch_size == 0:
            self.on_batch_start()
        self._episode += 1
        return self.env.reset()

    def n_actions(self, state) -> int:
        return self.env.n_actions(state)

    def step(self, state, action):
        next_state, pair, done = self.env.step(state, action)
        return next_state, apply_transform(pair, self.mode, self.pos_active, self.neg_active), done
