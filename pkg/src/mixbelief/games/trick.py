"""Plain two-player trick-taking game with hidden cards and follow-suit.

Cards are ``suit * ranks + rank``.  The deal is two chance events (seat 0's
hand, then seat 1's hand); whatever is left is hidden for the whole game.
Seat 0 leads the first trick, afterwards the trick winner leads.  Winning
strictly more than half of the tricks scores +1, exactly half is a draw.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, NamedTuple, Sequence

from ..fosg import CHANCE, TERMINAL, Game, GameError, Observation

SUIT_LETTERS = "SHDC"


@dataclass(frozen=True)
class TrickGameConfig:
    total_cards: int = 10
    hidden_cards: int = 2
    suits: int = 2

    def __post_init__(self):
        if self.suits < 1 or self.suits > len(SUIT_LETTERS):
            raise GameError("suits must be between 1 and 4")
        if self.total_cards % self.suits:
            raise GameError("total_cards must split evenly into suits")
        dealt = self.total_cards - self.hidden_cards
        if self.hidden_cards < 0 or dealt <= 0 or dealt % 2:
            raise GameError("total_cards - hidden_cards must be positive and even")

    @property
    def ranks(self) -> int:
        return self.total_cards // self.suits

    @property
    def hand_size(self) -> int:
        return (self.total_cards - self.hidden_cards) // 2


class TrickState(NamedTuple):
    hands: tuple[int, int]  # bitmasks; -1 while undealt
    hidden: int
    lead: int  # card led in the open trick, -1 if none
    leader: int
    tricks: tuple[int, int]


def cards_of(mask: int) -> list[int]:
    out = []
    c = 0
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return out


def mask_of(cards: Iterable[int]) -> int:
    m = 0
    for c in cards:
        m |= 1 << c
    return m


def trick_follow_constraint(hand: Sequence[int], lead_suit: int | None, ranks: int) -> list[int]:
    """Cards that may be played: lead-suit cards when holding any, else the whole hand."""
    hand = sorted(hand)
    if lead_suit is None:
        return hand
    follow = [c for c in hand if c // ranks == lead_suit]
    return follow or hand


def trick_winner(lead_seat: int, played: Sequence[int], ranks: int) -> int:
    """Seat holding the highest card of the led suit; ``played[k]`` is seat ``(lead_seat + k) % 2``'s card."""
    lead_suit = played[0] // ranks
    best = 0
    for k, card in enumerate(played[1:], start=1):
        if card // ranks == lead_suit and card > played[best]:
            best = k
    return (lead_seat + best) % 2


class TrickGame(Game):
    name = "trick"

    def __init__(self, total_cards: int = 10, hidden_cards: int = 2, suits: int = 2):
        self.config = TrickGameConfig(total_cards, hidden_cards, suits)
        self.ranks = self.config.ranks
        self.hand_size = self.config.hand_size
        self.num_actions = total_cards
        self.max_depth = 2 + 2 * self.hand_size
        self._full = (1 << total_cards) - 1

    def params(self):
        return {"cards": self.config.total_cards, "hidden": self.config.hidden_cards, "suits": self.config.suits}

    def card_label(self, c: int) -> str:
        return f"{SUIT_LETTERS[c // self.ranks]}{c % self.ranks + 1}"

    def action_label(self, a: int) -> str:
        return self.card_label(a)

    def chance_label(self, a: int) -> str:
        return ".".join(self.card_label(c) for c in cards_of(a))

    def num_deals(self) -> int:
        n, h = self.config.total_cards, self.hand_size
        return comb(n, h) * comb(n - h, h)

    # -- payload rules ---------------------------------------------------
    def _initial(self):
        return TrickState((-1, -1), 0, -1, 0, (0, 0))

    def _player(self, p: TrickState) -> int:
        if p.hands[1] < 0:
            return CHANCE
        if p.hands[0] == 0 and p.hands[1] == 0 and p.lead < 0:
            return TERMINAL
        return p.leader if p.lead < 0 else 1 - p.leader

    def _legal(self, p: TrickState):
        seat = self._player(p)
        hand = p.hands[seat]
        if p.lead >= 0:
            suit_mask = ((1 << self.ranks) - 1) << ((p.lead // self.ranks) * self.ranks)
            if hand & suit_mask:
                hand &= suit_mask
        return tuple(cards_of(hand))

    def _chance(self, p: TrickState):
        taken = p.hands[0] if p.hands[0] >= 0 else 0
        return _hand_outcomes(self._full & ~taken, self.hand_size)

    def _is_legal(self, p: TrickState, player: int, a: int) -> bool:
        if player == CHANCE:
            taken = p.hands[0] if p.hands[0] >= 0 else 0
            return a > 0 and bin(a).count("1") == self.hand_size and not a & (taken | ~self._full)
        return a in self._legal(p)

    def _next(self, p: TrickState, a: int) -> TrickState:
        if p.hands[0] < 0:
            return p._replace(hands=(a, -1))
        if p.hands[1] < 0:
            hidden = self._full & ~(p.hands[0] | a)
            return p._replace(hands=(p.hands[0], a), hidden=hidden)
        seat = self._player(p)
        hands = list(p.hands)
        hands[seat] &= ~(1 << a)
        if p.lead < 0:
            return p._replace(hands=tuple(hands), lead=a)
        winner = trick_winner(p.leader, (p.lead, a), self.ranks)
        tricks = list(p.tricks)
        tricks[winner] += 1
        return TrickState(tuple(hands), p.hidden, -1, winner, tuple(tricks))

    def _observe(self, p: TrickState, a: int, nxt: TrickState) -> Observation:
        if p.hands[0] < 0:
            return Observation("", (self.chance_label(a), ""))
        if p.hands[1] < 0:
            return Observation("", ("", self.chance_label(a)))
        return Observation(self.card_label(a), ("", ""))

    def _returns(self, p: TrickState):
        t0, t1 = p.tricks
        if t0 == t1:
            return (0.0, 0.0)
        return (1.0, -1.0) if t0 > t1 else (-1.0, 1.0)

    def played_mask(self, p: TrickState) -> int:
        if p.hands[1] < 0:
            return 0
        return self._full & ~(p.hands[0] | p.hands[1] | p.hidden)


@lru_cache(maxsize=4096)
def _hand_outcomes(available: int, size: int) -> tuple[tuple[int, float], ...]:
    cards = cards_of(available)
    hands = [mask_of(combo) for combo in itertools.combinations(cards, size)]
    prob = 1.0 / len(hands)
    return tuple((h, prob) for h in hands)
