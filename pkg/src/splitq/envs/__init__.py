"""Benchmark environments: decision chain, gambling decks, arcade chase, and
the nonstationary reward wrapper."""

from .igt import SCHEMES, DeckSpec, IgtEnv, IgtScheme
from .mdp import MdpEnv, MixtureSpec, ScenarioSpec, generate_scenario
from .nonstationary import (
    SCALE_FACTOR,
    NonstationarityMode,
    NonstationaryEnv,
    apply_transform,
)
from .pacman import (
    ACTIONS,
    SCARED_FRAMES,
    PacmanEnv,
    PacmanFeatures,
    PacmanLayout,
    PacmanState,
    load_layout,
)

__all__ = [
    "DeckSpec",
    "IgtEnv",
    "IgtScheme",
    "SCHEMES",
    "MdpEnv",
    "MixtureSpec",
    "ScenarioSpec",
    "generate_scenario",
    "NonstationarityMode",
    "NonstationaryEnv",
    "SCALE_FACTOR",
    "apply_transform",
    "ACTIONS",
    "SCARED_FRAMES",
    "PacmanEnv",
    "PacmanFeatures",
    "PacmanLayout",
    "PacmanState",
    "load_layout",
]
