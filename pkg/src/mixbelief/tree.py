"""Explicit enumeration of a whole game tree.

Only viable for the desk-scale configurations (Liar's Dice with one die,
Leduc, tiny trick games).  The index gives O(1) access to the histories that
share a public or private infostate, chance reach probabilities, and flat
numpy arrays consumed by the compiled IS-MCTS kernel.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .fosg import CHANCE, TERMINAL, Game, GameError, WorldState

DEFAULT_MAX_NODES = 2_000_000


@dataclass
class CompiledTree:
    player: np.ndarray
    child_start: np.ndarray
    child_count: np.ndarray
    child_action: np.ndarray
    child_node: np.ndarray
    child_prob: np.ndarray
    info_id: np.ndarray  # infostate id of the acting seat, -1 elsewhere
    util0: np.ndarray
    info_keys: list[tuple[int, str]]  # (seat, infostate key) per id
    info_index: dict[tuple[int, str], int] = field(repr=False)


class GameTree:
    """All histories of ``game`` in depth-first order (children in action order)."""

    def __init__(self, game: Game, max_nodes: int = DEFAULT_MAX_NODES):
        self.game = game
        self.nodes: list[WorldState] = []
        self.parent: list[int] = []
        self.reach: list[float] = []  # chance-only reach probability
        self.children: list[list[tuple[int, int, float]]] = []  # (action, node, chance prob)
        self._build(max_nodes)
        self.by_public: dict[str, list[int]] = defaultdict(list)
        self.by_info: list[dict[str, list[int]]] = [defaultdict(list), defaultdict(list)]
        for idx, w in enumerate(self.nodes):
            self.by_public[w.public_key].append(idx)
            for seat in (0, 1):
                self.by_info[seat][w.info_keys[seat]].append(idx)
        self.index = {w: i for i, w in enumerate(self.nodes)}
        self._compiled: CompiledTree | None = None

    def _build(self, max_nodes: int) -> None:
        game = self.game
        # (world, parent index, action from parent, chance prob of that action, chance reach)
        stack = [(game.initial_state(), -1, -1, 1.0, 1.0)]
        while stack:
            w, parent, action, prob, reach = stack.pop()
            idx = len(self.nodes)
            if idx >= max_nodes:
                raise GameError(f"{game.describe()} has more than {max_nodes} histories")
            self.nodes.append(w)
            self.parent.append(parent)
            self.reach.append(reach)
            self.children.append([])
            if parent >= 0:
                self.children[parent].append((action, idx, prob))
            if w.player == TERMINAL:
                continue
            if w.player == CHANCE:
                moves = list(game.chance_outcomes(w))
            else:
                moves = [(a, 0.0) for a in game.legal_actions(w)]
            for a, pa in reversed(moves):
                stack.append((game.child(w, a), idx, a, pa, reach * (pa if w.player == CHANCE else 1.0)))

    def __len__(self) -> int:
        return len(self.nodes)

    def decision_infostates(self, seat: int) -> list[str]:
        """Keys of every infostate where ``seat`` acts, in first-visit order."""
        seen: dict[str, None] = {}
        for w in self.nodes:
            if w.player == seat:
                seen.setdefault(w.info_keys[seat], None)
        return list(seen)

    def compiled(self) -> CompiledTree:
        if self._compiled is None:
            self._compiled = self._compile()
        return self._compiled

    def _compile(self) -> CompiledTree:
        n = len(self.nodes)
        player = np.empty(n, dtype=np.int64)
        child_start = np.zeros(n, dtype=np.int64)
        child_count = np.zeros(n, dtype=np.int64)
        info_id = np.full(n, -1, dtype=np.int64)
        util0 = np.zeros(n, dtype=np.float64)
        actions, targets, probs = [], [], []
        info_index: dict[tuple[int, str], int] = {}
        info_keys: list[tuple[int, str]] = []
        for i, w in enumerate(self.nodes):
            player[i] = w.player
            child_start[i] = len(actions)
            child_count[i] = len(self.children[i])
            for a, c, p in self.children[i]:
                actions.append(a)
                targets.append(c)
                probs.append(p)
            if w.player >= 0:
                key = (w.player, w.info_keys[w.player])
                if key not in info_index:
                    info_index[key] = len(info_keys)
                    info_keys.append(key)
                info_id[i] = info_index[key]
            elif w.player == TERMINAL:
                util0[i] = self.game.returns(w)[0]
        return CompiledTree(
            player=player,
            child_start=child_start,
            child_count=child_count,
            child_action=np.asarray(actions, dtype=np.int64),
            child_node=np.asarray(targets, dtype=np.int64),
            child_prob=np.asarray(probs, dtype=np.float64),
            info_id=info_id,
            util0=util0,
            info_keys=info_keys,
            info_index=info_index,
        )


_TREES: dict[str, GameTree] = {}


def game_tree(game: Game, max_nodes: int = DEFAULT_MAX_NODES) -> GameTree:
    """Process-wide cached tree for ``game``, keyed by its description."""
    key = game.describe()
    tree = _TREES.get(key)
    if tree is None:
        tree = _TREES[key] = GameTree(game, max_nodes)
    return tree
