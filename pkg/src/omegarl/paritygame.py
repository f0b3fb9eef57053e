"""Finite non-stochastic parity games and a McNaughton-style solver.

Colors live on moves (transition-labelled games).  The even player wins a
play iff the maximum color occurring infinitely often is even; a player who
cannot move loses.  The recursive solver returns positional winning
strategies for both players on their winning regions.

Internally the edge-colored game is split into a node-colored one (one
midpoint node per move, original nodes colored 0), which leaves every
cycle's maximum color unchanged.
"""

import sys
from dataclasses import dataclass, field

EVEN = 0
ODD = 1


@dataclass(frozen=True)
class ParityGame:
    owner: tuple  # per node: EVEN or ODD
    moves: tuple  # per node: tuple of (target node, color)
    initial: int = 0
    names: tuple = field(default=(), compare=False)  # optional display names

    @property
    def num_nodes(self):
        return len(self.owner)

    def max_color(self):
        return max((c for ms in self.moves for _, c in ms), default=0)


@dataclass(frozen=True)
class GameSolution:
    win_even: frozenset
    win_odd: frozenset
    strategy_even: dict  # node -> move index, on win_even only
    strategy_odd: dict


def mcnaughton_solve(game):
    """Solve an edge-colored parity game; returns regions and strategies."""
    n = len(game.owner)
    # split each move into a midpoint node carrying the color
    color = [0] * n
    owner = list(game.owner)
    succs = [[] for _ in range(n)]
    back = {}  # midpoint id -> (source node, move index)
    for v in range(n):
        for j, (t, c) in enumerate(game.moves[v]):
            m = len(color)
            color.append(c)
            owner.append(EVEN)  # single successor, owner irrelevant
            succs[v].append(m)
            succs.append([t])
            back[m] = (v, j)

    total = len(color)
    preds = [[] for _ in range(total)]
    for v in range(total):
        for t in succs[v]:
            preds[t].append(v)

    def attractor(alive, targets, player):
        """Player-`player` attractor of `targets` within `alive`.

        Opponent dead ends count as attracted (a stuck player loses).
        Returns the attractor set and the player's pull strategy.
        """
        attr = set(targets)
        strat = {}
        cnt = {}
        queue = list(targets)
        for v in alive:
            if owner[v] != player and v not in attr:
                c = sum(1 for t in succs[v] if t in alive)
                cnt[v] = c
                if c == 0:
                    attr.add(v)
                    queue.append(v)
        while queue:
            u = queue.pop()
            for w in preds[u]:
                if w not in alive or w in attr:
                    continue
                if owner[w] == player:
                    attr.add(w)
                    queue.append(w)
                    for j, t in enumerate(succs[w]):
                        if t in attr:
                            strat[w] = j
                            break
                else:
                    cnt[w] -= 1
                    if cnt[w] == 0:
                        attr.add(w)
                        queue.append(w)
        return attr, strat

    def solve(alive):
        if not alive:
            return set(), set(), {}, {}
        d = max(color[v] for v in alive)
        player = EVEN if d % 2 == 0 else ODD
        top = {v for v in alive if color[v] == d}
        attr, pull = attractor(alive, top, player)
        rest = alive - attr
        w0, w1, s0, s1 = solve(rest)
        wins = (w0, w1)
        strats = (s0, s1)
        if not wins[1 - player]:
            strat = dict(strats[player])
            strat.update(pull)
            for v in alive:
                if owner[v] == player and v not in strat:
                    for j, t in enumerate(succs[v]):
                        if t in alive:
                            strat[v] = j
                            break
            return (alive, set(), strat, {}) if player == EVEN else (set(), alive, {}, strat)
        trap, pull_opp = attractor(alive, wins[1 - player], 1 - player)
        w0b, w1b, s0b, s1b = solve(alive - trap)
        winsb = (w0b, w1b)
        stratsb = (s0b, s1b)
        opp = 1 - player
        win_opp = winsb[opp] | trap
        strat_opp = dict(strats[opp])  # winning on the inner region
        strat_opp.update(pull_opp)
        strat_opp.update(stratsb[opp])
        for v in win_opp:
            if owner[v] == opp and v not in strat_opp:
                for j, t in enumerate(succs[v]):
                    if t in win_opp:
                        strat_opp[v] = j
                        break
        win_pl = winsb[player]
        strat_pl = dict(stratsb[player])
        if player == EVEN:
            return win_pl, win_opp, strat_pl, strat_opp
        return win_opp, win_pl, strat_opp, strat_pl

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * total + 1000))
    try:
        w0, w1, s0, s1 = solve(set(range(total)))
    finally:
        sys.setrecursionlimit(old_limit)

    def project(region, strat, player):
        reg = frozenset(v for v in region if v < n)
        moves = {}
        for v in reg:
            if game.owner[v] != player:
                continue
            m = strat.get(v)
            if m is not None:
                moves[v] = m  # index into succs[v] == move index
        return reg, moves

    win_even, strat_even = project(w0, s0, EVEN)
    win_odd, strat_odd = project(w1, s1, ODD)
    return GameSolution(win_even, win_odd, strat_even, strat_odd)
