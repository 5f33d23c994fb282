"""Two-player Liar's Dice with the highest face wild."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional

from ..fosg import CHANCE, TERMINAL, Game, GameError, Observation


@dataclass(frozen=True)
class LiarsDiceConfig:
    dice_per_player: int = 1
    faces: int = 2

    def __post_init__(self):
        if self.dice_per_player < 1 or self.faces < 1:
            raise GameError("dice_per_player and faces must be positive")

    @property
    def total_dice(self) -> int:
        return 2 * self.dice_per_player


class LDState(NamedTuple):
    dice: tuple[Optional[tuple[int, ...]], Optional[tuple[int, ...]]]
    num_bids: int
    last_bid: int  # -1 before the first bid
    challenger: int  # -1 until someone calls "liar"


def ld_legal_bids(last_bid: int, num_bids_total: int) -> tuple[int, ...]:
    """Bid ids strictly above ``last_bid``; the challenge id is ``num_bids_total``."""
    bids = tuple(range(last_bid + 1, num_bids_total))
    return bids + (num_bids_total,) if last_bid >= 0 else bids


def count_matching(dice: tuple[int, ...], face: int, faces: int) -> int:
    """Dice showing ``face``; the top face counts for every face."""
    if face == faces:
        return sum(d == faces for d in dice)
    return sum(d == face or d == faces for d in dice)


def ld_resolve_challenge(dice: tuple[int, ...], bid: tuple[int, int], faces: int, bidder: int) -> int:
    """Winning seat after ``bid`` (count, face) made by ``bidder`` is challenged."""
    count, face = bid
    stands = count_matching(dice, face, faces) >= count
    return bidder if stands else 1 - bidder


class LiarsDice(Game):
    name = "liars_dice"

    def __init__(self, dice_per_player: int = 1, faces: int = 2):
        self.config = LiarsDiceConfig(dice_per_player, faces)
        self.faces = faces
        self.dice_per_player = dice_per_player
        self.num_bids = self.config.total_dice * faces
        self.challenge = self.num_bids
        self.num_actions = self.num_bids + 1
        self.max_depth = 2 + self.num_bids + 1
        rolls = list(itertools.product(range(1, faces + 1), repeat=dice_per_player))
        p = 1.0 / len(rolls)
        self._rolls = rolls
        self._roll_outcomes = tuple((i, p) for i in range(len(rolls)))

    def params(self):
        return {"dice": self.dice_per_player, "faces": self.faces}

    def bid(self, a: int) -> tuple[int, int]:
        """(count, face) of bid id ``a``."""
        if not 0 <= a < self.num_bids:
            raise GameError(f"{a} is not a bid")
        return a // self.faces + 1, a % self.faces + 1

    def bid_id(self, count: int, face: int) -> int:
        if not (1 <= count <= self.config.total_dice and 1 <= face <= self.faces):
            raise GameError(f"bid ({count}, {face}) out of range")
        return (count - 1) * self.faces + face - 1

    def action_label(self, a: int) -> str:
        if a == self.challenge:
            return "challenge"
        count, face = self.bid(a)
        return f"{count}x{face}"

    def chance_label(self, a: int) -> str:
        return "".join(str(d) for d in self._rolls[a])

    def roll_id(self, dice: tuple[int, ...]) -> int:
        return self._rolls.index(tuple(dice))

    # -- payload rules ---------------------------------------------------
    def _initial(self):
        return LDState((None, None), 0, -1, -1)

    def _player(self, p: LDState) -> int:
        if p.challenger >= 0:
            return TERMINAL
        if p.dice[0] is None or p.dice[1] is None:
            return CHANCE
        return p.num_bids % 2

    def _legal(self, p: LDState):
        return ld_legal_bids(p.last_bid, self.num_bids)

    def _chance(self, p: LDState):
        return self._roll_outcomes

    def _next(self, p: LDState, a: int) -> LDState:
        if p.dice[0] is None:
            return LDState((self._rolls[a], None), 0, -1, -1)
        if p.dice[1] is None:
            return LDState((p.dice[0], self._rolls[a]), 0, -1, -1)
        if a == self.challenge:
            return LDState(p.dice, p.num_bids, p.last_bid, p.num_bids % 2)
        return LDState(p.dice, p.num_bids + 1, a, -1)

    def _observe(self, p: LDState, a: int, nxt: LDState) -> Observation:
        if p.dice[0] is None:
            return Observation("", (self.chance_label(a), ""))
        if p.dice[1] is None:
            return Observation("", ("", self.chance_label(a)))
        return Observation(self.action_label(a), ("", ""))

    def _returns(self, p: LDState):
        challenger = p.challenger
        bidder = 1 - challenger
        winner = ld_resolve_challenge(p.dice[0] + p.dice[1], self.bid(p.last_bid), self.faces, bidder)
        return (1.0, -1.0) if winner == 0 else (-1.0, 1.0)
