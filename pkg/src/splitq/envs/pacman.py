"""Grid arcade chase: eat every dot, dodge random-walking ghosts.

Scoring per frame: -1 time penalty, +10 per dot, +500 for clearing the board,
+200 for eating a scared ghost, -500 for being caught.  Gains and losses
travel on separate reward streams, so a frame that both eats a dot and pays
the time penalty yields the pair (10, -1).

Eating a power pellet scares every ghost for 40 frames; scared ghosts move at
half speed (they sit out every other frame) and are eaten on contact, which
sends them back to their spawn cell.  Ghosts pick uniformly at random among
their legal moves.  A move into a wall leaves the mover in place.

Layouts are parsed from small text grids: ``%`` wall, ``.`` dot, ``o`` power
pellet, ``P`` player start, ``G`` ghost start, space for open floor.
"""

from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from ..core import RewardPair

__all__ = [
    "PacmanLayout",
    "PacmanState",
    "PacmanEnv",
    "PacmanFeatures",
    "load_layout",
    "ACTIONS",
    "SCARED_FRAMES",
]

# up, down, left, right as (row, col) deltas; action indices follow this order
ACTIONS = ((-1, 0), (1, 0), (0, -1), (0, 1))

SCARED_FRAMES = 40

DOT_SCORE = 10.0
WIN_SCORE = 500.0
GHOST_SCORE = 200.0
DEATH_SCORE = -500.0
TIME_PENALTY = -1.0


@dataclass(frozen=True)
class PacmanLayout:
    """Static maze geometry plus the initial item and actor placement.

    ``distances`` is the all-pairs shortest-path matrix over floor cells
    (index = row * width + col), with unreachable pairs set to width * height.
    It is precomputed once so feature extraction never needs a search.
    """

    walls: np.ndarray = field(compare=False)
    dots: frozenset = frozenset()
    pellets: frozenset = frozenset()
    pacman_start: tuple = (0, 0)
    ghost_starts: tuple = ()
    distances: np.ndarray = field(default=None, compare=False, repr=False)

    @property
    def height(self) -> int:
        return self.walls.shape[0]

    @property
    def width(self) -> int:
        return self.walls.shape[1]

    def cell_index(self, pos) -> int:
        return pos[0] * self.width + pos[1]

    def is_wall(self, pos) -> bool:
        r, c = pos
        if not (0 <= r < self.height and 0 <= c < self.width):
            return True
        return bool(self.walls[r, c])

    def legal_targets(self, pos):
        """Neighbouring floor cells of ``pos`` (staying put is not a move)."""
        out = []
        for dr, dc in ACTIONS:
            nxt = (pos[0] + dr, pos[1] + dc)
            if not self.is_wall(nxt):
                out.append(nxt)
        return out

    @classmethod
    def parse(cls, text: str) -> "PacmanLayout":
        rows = [line for line in text.splitlines() if line.strip()]
        if not rows:
            raise ValueError("empty layout")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("layout rows must all have the same length")
        height = len(rows)
        walls = np.zeros((height, width), dtype=bool)
        dots = set()
        pellets = set()
        pacman = None
        ghosts = []
        for r, row in enumerate(rows):
            for c, ch in enumerate(row):
                if ch == "%":
                    walls[r, c] = True
                elif ch == ".":
                    dots.add((r, c))
                elif ch == "o":
                    pellets.add((r, c))
                elif ch == "P":
                    if pacman is not None:
                        raise ValueError("layout declares more than one player start")
                    pacman = (r, c)
                elif ch == "G":
                    ghosts.append((r, c))
                elif ch != " ":
                    raise ValueError(f"unknown layout character {ch!r} at row {r}, col {c}")
        if pacman is None:
            raise ValueError("layout declares no player start (P)")
        if not dots:
            raise ValueError("layout declares no dots to eat")
        layout = cls(
            walls=walls,
            dots=frozenset(dots),
            pellets=frozenset(pellets),
            pacman_start=pacman,
            ghost_starts=tuple(ghosts),
            distances=_all_pairs_distances(walls),
        )
        return layout


def _all_pairs_distances(walls: np.ndarray) -> np.ndarray:
    """BFS from every floor cell; walls and unreachable cells get width*height."""
    height, width = walls.shape
    n = height * width
    big = n
    dist = np.full((n, n), big, dtype=np.int32)
    for r in range(height):
        for c in range(width):
            if walls[r, c]:
                continue
            src = r * width + c
            dist[src, src] = 0
            queue = deque([(r, c)])
            while queue:
                cr, cc = queue.popleft()
                base = dist[src, cr * width + cc]
                for dr, dc in ACTIONS:
                    nr, nc = cr + dr, cc + dc
                    if 0 <= nr < height and 0 <= nc < width and not walls[nr, nc]:
                        idx = nr * width + nc
                        if dist[src, idx] > base + 1:
                            dist[src, idx] = base + 1
                            queue.append((nr, nc))
    return dist


def load_layout(path: Optional[str] = None) -> PacmanLayout:
    """Read a layout file; with no path, load the built-in small maze."""
    if path is None:
        text = resources.files("splitq.envs").joinpath("layouts/small.lay").read_text()
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    return PacmanLayout.parse(text)


@dataclass(frozen=True)
class PacmanState:
    """One frame: actor positions, scare timers, remaining items, frame count."""

    layout: PacmanLayout = field(compare=False, hash=False)
    pacman: tuple = (0, 0)
    ghosts: tuple = ()
    scared: tuple = ()
    dots: frozenset = frozenset()
    pellets: frozenset = frozenset()
    frame: int = 0


class PacmanEnv:
    """Stateless-step wrapper around the chase rules.

    ``step(state, action)`` computes the full frame from the given state;
    only the ghost-move randomness lives in the environment (``rng``).  Runs
    end on a win (board cleared), a death, or the ``max_frames`` safety cap.
    """

    def __init__(self, layout: PacmanLayout, rng: np.random.Generator, max_frames: int = 400):
        if max_frames < 1:
            raise ValueError(f"max_frames must be >= 1, got {max_frames!r}")
        self.layout = layout
        self.rng = rng
        self.max_frames = max_frames

    def reset(self) -> PacmanState:
        layout = self.layout
        return PacmanState(
            layout=layout,
            pacman=layout.pacman_start,
            ghosts=layout.ghost_starts,
            scared=(0,) * len(layout.ghost_starts),
            dots=layout.dots,
            pellets=layout.pellets,
            frame=0,
        )

    def n_actions(self, state: PacmanState) -> int:
        return len(ACTIONS)

    def step(self, state: PacmanState, action: int):
        if not 0 <= action < len(ACTIONS):
            raise ValueError(f"action index must be 0..{len(ACTIONS) - 1}, got {action!r}")
        layout = self.layout
        frame = state.frame + 1
        gain = 0.0
        loss = TIME_PENALTY

        dr, dc = ACTIONS[action]
        target = (state.pacman[0] + dr, state.pacman[1] + dc)
        if layout.is_wall(target):
            target = state.pacman

        ghosts = list(state.ghosts)
        scared = list(state.scared)

        # Contact where the player moved onto a ghost.
        for i, ghost in enumerate(ghosts):
            if ghost != target:
                continue
            if scared[i] > 0:
                gain += GHOST_SCORE
                ghosts[i] = layout.ghost_starts[i]
                scared[i] = 0
            else:
                loss += DEATH_SCORE
                dead_state = PacmanState(
                    layout=layout,
                    pacman=target,
                    ghosts=tuple(ghosts),
                    scared=tuple(scared),
                    dots=state.dots,
                    pellets=state.pellets,
                    frame=frame,
                )
                return dead_state, RewardPair(gain, loss), True

        dots = state.dots
        pellets = state.pellets
        if target in dots:
            gain += DOT_SCORE
            dots = dots - {target}
        elif target in pellets:
            pellets = pellets - {target}
            scared = [SCARED_FRAMES] * len(ghosts)

        if not dots:
            gain += WIN_SCORE
            won_state = PacmanState(
                layout=layout,
                pacman=target,
                ghosts=tuple(ghosts),
                scared=tuple(scared),
                dots=dots,
                pellets=pellets,
                frame=frame,
            )
            return won_state, RewardPair(gain, loss), True

        # Ghost phase: scared ghosts sit out odd frames (half speed).
        caught = False
        for i, ghost in enumerate(ghosts):
            if scared[i] > 0 and frame % 2 == 1:
                continue
            choices = layout.legal_targets(ghost)
            if choices:
                ghosts[i] = choices[int(self.rng.integers(len(choices)))]
            if ghosts[i] == target:
                if scared[i] > 0:
                    gain += GHOST_SCORE
                    ghosts[i] = layout.ghost_starts[i]
                    scared[i] = 0
                else:
                    loss += DEATH_SCORE
                    caught = True
                    break

        scared = [max(0, t - 1) for t in scared]
        next_state = PacmanState(
            layout=layout,
            pacman=target,
            ghosts=tuple(ghosts),
            scared=tuple(scared),
            dots=dots,
            pellets=pellets,
            frame=frame,
        )
        done = caught or frame >= self.max_frames
        return next_state, RewardPair(gain, loss), done


class PacmanFeatures:
    """Compact distance-based features for linear agents.

    All distances come from the layout's precomputed shortest-path matrix and
    are normalised by the board area; the whole vector is scaled by 0.1 to
    keep weight updates small against rewards of up to +/-500.
    """

    NAMES = (
        "bias",
        "eats-dot",
        "closest-dot",
        "ghosts-1-step",
        "ghost-at-target",
        "eats-pellet",
        "scared-1-step",
        "closest-scared",
        "closest-ghost",
    )

    def __init__(self, layout: PacmanLayout):
        self.layout = layout
        self.dim = len(self.NAMES)

    def __call__(self, state: PacmanState, action: int) -> np.ndarray:
        layout = self.layout
        dist = layout.distances
        dr, dc = ACTIONS[action]
        target = (state.pacman[0] + dr, state.pacman[1] + dc)
        if layout.is_wall(target):
            target = state.pacman
        t_idx = layout.cell_index(target)
        area = float(layout.height * layout.width)

        active = [g for g, timer in zip(state.ghosts, state.scared) if timer == 0]
        frightened = [g for g, timer in zip(state.ghosts, state.scared) if timer > 0]
        n_ghosts = max(1, len(state.ghosts))

        active_near = sum(1 for g in active if dist[t_idx, layout.cell_index(g)] <= 1)
        active_here = any(dist[t_idx, layout.cell_index(g)] == 0 for g in active)
        scared_near = sum(1 for g in frightened if dist[t_idx, layout.cell_index(g)] <= 1)

        if state.dots:
            closest_dot = min(dist[t_idx, layout.cell_index(d)] for d in state.dots) / area
        else:
            closest_dot = 0.0
        if frightened:
            nearest_scared = min(dist[t_idx, layout.cell_index(g)] for g in frightened) / area
            scared_pull = 1.0 - nearest_scared
        else:
            scared_pull = 0.0
        if active:
            # Medium-range danger gradient; the local 1-step flags alone leave
            # the pain stream blind to anything beyond adjacent cells.
            closest_ghost = min(dist[t_idx, layout.cell_index(g)] for g in active) / area
        else:
            closest_ghost = 1.0

        eats_dot = 1.0 if (target in state.dots and active_near == 0) else 0.0
        eats_pellet = 1.0 if target in state.pellets else 0.0

        psi = np.array(
            [
                1.0,
                eats_dot,
                closest_dot,
                active_near / n_ghosts,
                1.0 if active_here else 0.0,
                eats_pellet,
                scared_near / n_ghosts,
                scared_pull,
                closest_ghost,
            ]
        )
        return psi * 0.1
