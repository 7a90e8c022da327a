"""splitq: two-stream (split) Q-learning workbench.

Agents that learn gains and losses in separate value tables, the benchmark
environments they are evaluated on, and a seeded tournament engine that makes
scores comparable across agents.
"""

__version__ = "0.1.0"

from .core import (
    AgentParams,
    LinearQFunction,
    QTables,
    RewardPair,
    RowTable,
    RunSeed,
    ZERO_REWARD,
    epsilon_greedy,
    polynomial_learning_rate,
    split_reward,
)
from .agents import AgentKind, make_agent, preset_params

__all__ = [
    "__version__",
    "AgentParams",
    "LinearQFunction",
    "QTables",
    "RewardPair",
    "RowTable",
    "RunSeed",
    "ZERO_REWARD",
    "epsilon_greedy",
    "polynomial_learning_rate",
    "split_reward",
    "AgentKind",
    "make_agent",
    "preset_params",
]
