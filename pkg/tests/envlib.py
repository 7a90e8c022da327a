"""Small fixture environments with explicit transition tables.

The same tables feed both the package's rollout machinery (through FiniteMdp)
and the reference solvers in oracles.py, so tests compare learned values
against independently computed ones on literally the same dynamics.
"""

import numpy as np

from splitq.core import split_reward

# Deterministic 4-state chain.  Action 0 advances (state 3 ends the episode),
# action 1 stays put at a penalty.  Advancing is optimal everywhere.
CHAIN_TRANSITIONS = {
    (0, 0): [(1.0, 1, 5.0)],
    (0, 1): [(1.0, 0, -1.0)],
    (1, 0): [(1.0, 2, -1.0)],
    (1, 1): [(1.0, 1, -3.0)],
    (2, 0): [(1.0, 3, 2.0)],
    (2, 1): [(1.0, 2, -2.0)],
    (3, 0): [(1.0, None, 10.0)],
    (3, 1): [(1.0, 3, -4.0)],
}
CHAIN_GAMMA = 0.95

# Hand-computed optimal Q of the chain at gamma 0.95, starting from
# Q(3,0) = 10 and folding back:
#   Q(2,0) = 2 + .95*10        = 11.5
#   Q(1,0) = -1 + .95*11.5     = 9.925
#   Q(0,0) = 5 + .95*9.925     = 14.42875
#   Q(s,1) = stay penalty + .95 * V(s)
CHAIN_OPTIMAL_Q = np.array(
    [
        [14.42875, 12.7073125],
        [9.925, 6.42875],
        [11.5, 8.925],
        [10.0, 5.5],
    ]
)


# Loop-free 3-state chain with only losses, two actions per state.  The
# worst-pain path is finite, so a max-pain learner reaches its fixed point
# quickly (self-loops would make that fixed point a slow geometric series).
PAIN_CHAIN_TRANSITIONS = {
    (0, 0): [(1.0, 1, -3.0)],
    (0, 1): [(1.0, 1, -1.0)],
    (1, 0): [(1.0, 2, -5.0)],
    (1, 1): [(1.0, 2, 0.0)],
    (2, 0): [(1.0, None, -2.0)],
    (2, 1): [(1.0, None, -8.0)],
}


def pain_chain_env():
    return FiniteMdp(3, 2, PAIN_CHAIN_TRANSITIONS)


class FiniteMdp:
    """Rollout-protocol wrapper around an explicit transition table.

    Deterministic transitions (a single branch) consume no randomness, so two
    instances stay aligned whenever their action sequences match.  Stochastic
    steps consume exactly one uniform each.
    """

    def __init__(self, n_states, n_actions, transitions, rng=None, start=0):
        self.n_states = n_states
        self._n_actions = n_actions
        self.transitions = transitions
        self.rng = rng
        self.start = start

    def reset(self):
        return self.start

    def n_actions(self, state):
        return self._n_actions

    def step(self, state, action):
        branches = self.transitions[(state, action)]
        if len(branches) == 1:
            _, nxt, reward = branches[0]
        else:
            if self.rng is None:
                raise ValueError("stochastic transitions need an rng")
            u = self.rng.random()
            threshold = 0.0
            chosen = branches[-1]
            for branch in branches:
                threshold += branch[0]
                if u < threshold:
                    chosen = branch
                    break
            _, nxt, reward = chosen
        if nxt is None:
            return self.start, split_reward(reward), True
        return nxt, split_reward(reward), False


def chain_env():
    return FiniteMdp(4, 2, CHAIN_TRANSITIONS)


def random_positive_mdp(seed, n_states=3, n_actions=2):
    """Continuing MDP with random two-branch transitions and rewards in [0, 10].

    Returns (transitions, make_env) where make_env(env_seed) builds a fresh
    instance with its own transition-noise stream.
    """
    rng = np.random.default_rng(seed)
    transitions = {}
    for s in range(n_states):
        for a in range(n_actions):
            p = float(rng.uniform(0.2, 0.8))
            targets = rng.integers(0, n_states, size=2)
            rewards = rng.uniform(0.0, 10.0, size=2)
            transitions[(s, a)] = [
                (p, int(targets[0]), float(rewards[0])),
                (1.0 - p, int(targets[1]), float(rewards[1])),
            ]

    def make_env(env_seed):
        return FiniteMdp(
            n_states, n_actions, transitions, rng=np.random.default_rng(env_seed)
        )

    return transitions, make_env


def random_mixed_mdp(seed, n_states=3, n_actions=2, terminal_prob=0.15):
    """Episodic MDP with rewards in [-10, 10] and random terminal branches."""
    rng = np.random.default_rng(seed)
    transitions = {}
    for s in range(n_states):
        for a in range(n_actions):
            p = float(rng.uniform(0.2, 0.8))
            target_a = int(rng.integers(0, n_states))
            target_b = None if rng.random() < terminal_prob else int(rng.integers(0, n_states))
            rewards = rng.uniform(-10.0, 10.0, size=2)
            transitions[(s, a)] = [
                (p, target_a, float(rewards[0])),
                (1.0 - p, target_b, float(rewards[1])),
            ]

    def make_env(env_seed):
        return FiniteMdp(
            n_states, n_actions, transitions, rng=np.random.default_rng(env_seed)
        )

    return transitions, make_env
