"""Leduc Hold'em: six cards (two suits of J, Q, K), two betting rounds, one board card.

Seat 0 acts first in both rounds.  Fold is always available, as in the
three-action betting alphabet; raising is capped at two per round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ..fosg import CHANCE, TERMINAL, Game, GameError, Observation

FOLD, CALL, RAISE = 0, 1, 2
RANKS = "JQK"
SUITS = "sh"


@dataclass(frozen=True)
class LeducConfig:
    ranks: int = 3
    suits: int = 2
    ante: int = 1
    raise_sizes: tuple[int, int] = (2, 4)
    max_raises: int = 2

    @property
    def deck_size(self) -> int:
        return self.ranks * self.suits


class LeducState(NamedTuple):
    cards: tuple[int, int, int]  # seat 0, seat 1, board; -1 while undealt
    round: int  # 0 or 1
    actions_in_round: int
    raises: int
    contrib: tuple[int, int]
    to_act: int
    folded: int  # seat that folded, -1 otherwise
    showdown: bool


def rank_of(card: int) -> int:
    return card // 2


def card_label(card: int) -> str:
    return RANKS[rank_of(card)] + SUITS[card % 2]


def showdown_winner(c0: int, c1: int, board: int) -> int:
    """Winning seat at showdown, or -1 for a split pot."""
    r0, r1, rb = rank_of(c0), rank_of(c1), rank_of(board)
    pair0, pair1 = r0 == rb, r1 == rb
    if pair0 != pair1:
        return 0 if pair0 else 1
    if r0 == r1:
        return -1
    return 0 if r0 > r1 else 1


class Leduc(Game):
    name = "leduc"
    num_actions = 3
    max_depth = 3 + 2 * 4 + 2

    def __init__(self):
        self.config = LeducConfig()
        self._deck = tuple(range(self.config.deck_size))

    def action_label(self, a: int) -> str:
        return ("fold", "call", "raise")[a]

    def chance_label(self, a: int) -> str:
        return card_label(a)

    def _initial(self):
        ante = self.config.ante
        return LeducState((-1, -1, -1), 0, 0, 0, (ante, ante), 0, -1, False)

    def _player(self, p: LeducState) -> int:
        if p.folded >= 0 or p.showdown:
            return TERMINAL
        if p.cards[1] < 0 or (p.round == 1 and p.cards[2] < 0):
            return CHANCE
        return p.to_act

    def _legal(self, p: LeducState):
        if p.raises < self.config.max_raises:
            return (FOLD, CALL, RAISE)
        return (FOLD, CALL)

    def _chance(self, p: LeducState):
        used = {c for c in p.cards if c >= 0}
        left = [c for c in self._deck if c not in used]
        prob = 1.0 / len(left)
        return tuple((c, prob) for c in left)

    def _next(self, p: LeducState, a: int) -> LeducState:
        c0, c1, board = p.cards
        if c0 < 0:
            return p._replace(cards=(a, -1, -1))
        if c1 < 0:
            return p._replace(cards=(c0, a, -1))
        if p.round == 1 and board < 0:
            return p._replace(cards=(c0, c1, a))
        seat = p.to_act
        if a == FOLD:
            return p._replace(folded=seat)
        contrib = list(p.contrib)
        if a == RAISE:
            if p.raises >= self.config.max_raises:
                raise GameError("raise cap reached")
            contrib[seat] = max(contrib) + self.config.raise_sizes[p.round]
            return p._replace(
                contrib=tuple(contrib),
                raises=p.raises + 1,
                actions_in_round=p.actions_in_round + 1,
                to_act=1 - seat,
            )
        contrib[seat] = max(contrib)
        if p.actions_in_round == 0:
            return p._replace(contrib=tuple(contrib), actions_in_round=1, to_act=1 - seat)
        if p.round == 0:
            return LeducState(p.cards, 1, 0, 0, tuple(contrib), 0, -1, False)
        return p._replace(contrib=tuple(contrib), showdown=True)

    def _observe(self, p: LeducState, a: int, nxt: LeducState) -> Observation:
        c0, c1, board = p.cards
        if c0 < 0:
            return Observation("", (card_label(a), ""))
        if c1 < 0:
            return Observation("", ("", card_label(a)))
        if p.round == 1 and board < 0:
            return Observation(card_label(a), ("", ""))
        return Observation(self.action_label(a), ("", ""))

    def _returns(self, p: LeducState):
        if p.folded >= 0:
            loser = p.folded
        else:
            winner = showdown_winner(*p.cards)
            if winner < 0:
                return (0.0, 0.0)
            loser = 1 - winner
        amount = float(p.contrib[loser])
        return (-amount, amount) if loser == 0 else (amount, -amount)
