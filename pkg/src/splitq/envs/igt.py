"""Four-deck gambling task with two published payoff schemes.

Every card pays a fixed gain plus at most one loss drawn from the deck's loss
table.  Decks A and B are traps (high gain, expected value -25 per card);
decks C and D are the good decks (+25 per card).  Scheme 1 spreads deck C's
losses over three amounts, scheme 2 concentrates each deck's losses in a
single amount; expected values match across schemes.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import RewardPair

__all__ = ["DeckSpec", "IgtScheme", "SCHEMES", "IgtEnv"]


@dataclass(frozen=True)
class DeckSpec:
    """One deck: a guaranteed ``win`` per card and a table of (loss, probability).

    Losses are nonpositive amounts; probabilities may sum to less than one,
    the remainder being loss-free cards.  At most one loss applies per card.
    """

    name: str
    win: float
    losses: tuple = ()

    def __post_init__(self):
        if self.win < 0.0:
            raise ValueError(f"deck win must be >= 0, got {self.win!r}")
        total = 0.0
        for amount, prob in self.losses:
            if amount > 0.0:
                raise ValueError(f"deck losses must be <= 0, got {amount!r}")
            if not 0.0 <= prob <= 1.0:
                raise ValueError(f"loss probability must lie in [0, 1], got {prob!r}")
            total += prob
        if total > 1.0 + 1e-12:
            raise ValueError(f"loss probabilities for deck {self.name} sum to {total} > 1")

    @property
    def expected_value(self) -> float:
        return self.win + sum(amount * prob for amount, prob in self.losses)

    def sample_loss(self, rng: np.random.Generator) -> float:
        """Draw this card's loss (possibly 0); consumes exactly one uniform."""
        u = rng.random()
        threshold = 0.0
        for amount, prob in self.losses:
            threshold += prob
            if u < threshold:
                return amount
        return 0.0

    def sample_combined(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Vectorised combined payouts of ``size`` cards (for distribution checks)."""
        u = rng.random(size)
        losses = np.zeros(size)
        threshold = 0.0
        for amount, prob in self.losses:
            losses = np.where((threshold <= u) & (u < threshold + prob), amount, losses)
            threshold += prob
        return self.win + losses


@dataclass(frozen=True)
class IgtScheme:
    """A full payoff scheme: four decks indexed 0..3 as A..D."""

    scheme_id: int
    decks: tuple

    def __post_init__(self):
        if len(self.decks) != 4:
            raise ValueError(f"a scheme needs exactly 4 decks, got {len(self.decks)}")

    def deck(self, index: int) -> DeckSpec:
        return self.decks[index]


SCHEMES: dict[int, IgtScheme] = {
    1: IgtScheme(
        scheme_id=1,
        decks=(
            DeckSpec("A", 100.0, ((-150.0, 0.1), (-200.0, 0.1), (-250.0, 0.1), (-300.0, 0.1), (-350.0, 0.1))),
            DeckSpec("B", 100.0, ((-1250.0, 0.1),)),
            DeckSpec("C", 50.0, ((-25.0, 0.1), (-75.0, 0.1), (-50.0, 0.3))),
            DeckSpec("D", 50.0, ((-250.0, 0.1),)),
        ),
    ),
    2: IgtScheme(
        scheme_id=2,
        decks=(
            DeckSpec("A", 100.0, ((-150.0, 0.1), (-200.0, 0.1), (-250.0, 0.1), (-300.0, 0.1), (-350.0, 0.1))),
            DeckSpec("B", 100.0, ((-1250.0, 0.1),)),
            DeckSpec("C", 50.0, ((-50.0, 0.5),)),
            DeckSpec("D", 50.0, ((-250.0, 0.1),)),
        ),
    ),
}


class IgtEnv:
    """Deck-picking task: one state, four actions, two-stream payouts.

    The win lands in the gain stream and the sampled loss in the loss stream
    of the same pair, so a card's combined value is win + loss.  With
    ``deck_rngs`` each deck consumes its own stream, making the k-th card of
    a deck identical across agents that share seeds.  ``horizon`` bounds a
    run; the final step reports done.
    """

    STATE = "I"

    def __init__(
        self,
        scheme: IgtScheme,
        deck_rngs,
        horizon: Optional[int] = None,
    ):
        if len(deck_rngs) != 4:
            raise ValueError(f"need one generator per deck, got {len(deck_rngs)}")
        if horizon is not None and horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {horizon!r}")
        self.scheme = scheme
        self.deck_rngs = list(deck_rngs)
        self.horizon = horizon
        self._t = 0

    def reset(self) -> str:
        self._t = 0
        return self.STATE

    def n_actions(self, state: str) -> int:
        return 4

    def step(self, state: str, action: int):
        if state != self.STATE:
            raise ValueError(f"unknown state {state!r}")
        if not 0 <= action < 4:
            raise ValueError(f"deck index must be 0..3, got {action!r}")
        deck = self.scheme.deck(action)
        loss = deck.sample_loss(self.deck_rngs[action])
        pair = RewardPair(deck.win, loss)
        self._t += 1
        done = self.horizon is not None and self._t >= self.horizon
        return self.STATE, pair, done
