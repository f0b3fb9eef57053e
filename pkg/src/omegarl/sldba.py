"""Limit-deterministic Buchi automata: construction, minimization, and the
simulation game that certifies an input NBA as safe to compose with MDPs.

The constructed automaton has a nondeterministic-free initial part (a subset
construction without acceptance) and a deterministic final part (a breakpoint
construction over (S, B) pairs); the only nondeterminism is the epsilon jump
from the initial part into final-part seeds.

A fair-simulation game between the input NBA (duplicator, even player) and
the SLDBA (spoiler, odd player) is built as a 3-color transition-labelled
parity game.  If the even player wins, the NBA simulates the SLDBA and can
itself be used on MDPs; otherwise the verdict is only "not proven", never
"not suitable".
"""

from dataclasses import dataclass, field

from .errors import UnsupportedAcceptance
from .graphs import reachable_from, strongly_connected_components
from .hoa import Automaton, Edge, guard_from_terms, normalize_to_parity
from .paritygame import EVEN, ODD, GameSolution, ParityGame, mcnaughton_solve

ALL_PASSES = ("empty-subsume", "bisim-final", "bisim-initial", "lang-equiv-final", "eps-jump")


@dataclass(frozen=True)
class Sldba:
    automaton: Automaton
    initial_part: frozenset
    final_part: frozenset
    # metadata used by the exact minimization passes
    source: Automaton = field(compare=False, default=None)
    initial_sets: dict = field(compare=False, default_factory=dict)  # state -> frozenset of NBA states
    final_sets: dict = field(compare=False, default_factory=dict)  # state -> (S, B) frozensets

    @property
    def num_states(self):
        return self.automaton.num_states


def _accepting(edge):
    return edge.priority == 1


def _valuations(num_aps):
    return range(1 << num_aps)


def _minterm(bits, num_aps):
    mask = (1 << num_aps) - 1
    return (bits, ~bits & mask)


def nba_to_sldba(nba):
    """Subset initial part, breakpoint final part, epsilon jumps to seeds."""
    if nba.acceptance not in ("buchi", "parity"):
        raise UnsupportedAcceptance("the SLDBA construction needs a Buchi automaton")
    aut = nba if nba.normalized() else normalize_to_parity(nba)
    if aut.max_priority() > 1:
        raise UnsupportedAcceptance("the SLDBA construction needs a Buchi automaton")
    nap = aut.num_aps

    init_index = {}
    init_order = []

    def intern_init(subset):
        if subset not in init_index:
            init_index[subset] = len(init_order)
            init_order.append(subset)
        return init_index[subset]

    start = frozenset({aut.initial})
    intern_init(start)
    queue = [start]
    init_edges = {}
    while queue:
        subset = queue.pop(0)
        by_target = {}
        for bits in _valuations(nap):
            tgt = frozenset(
                e.target for q in subset for e in aut.edges[q] if e.guard.satisfies(bits))
            if not tgt:
                continue
            by_target.setdefault(tgt, []).append(bits)
        edges = []
        for tgt in sorted(by_target, key=sorted):
            if tgt not in init_index:
                queue.append(tgt)
            j = intern_init(tgt)
            guard = guard_from_terms([_minterm(b, nap) for b in by_target[tgt]])
            edges.append((guard, j))
        init_edges[subset] = edges

    final_index = {}
    final_order = []

    def intern_final(pair):
        if pair not in final_index:
            final_index[pair] = len(final_order)
            final_order.append(pair)
        return final_index[pair]

    seeds_of = {}  # initial subset -> list of seed pairs
    fqueue = []
    for subset in init_order:
        seeds = []
        for q in sorted(subset):
            pair = (frozenset({q}), frozenset())
            if pair not in final_index:
                fqueue.append(pair)
            intern_final(pair)
            seeds.append(pair)
        seeds_of[subset] = seeds

    final_edges = {}
    while fqueue:
        pair = fqueue.pop(0)
        if pair in final_edges:
            continue
        S, B = pair
        moves = {}
        for bits in _valuations(nap):
            S2 = set()
            B2 = set()
            for q in S:
                for e in aut.edges[q]:
                    if not e.guard.satisfies(bits):
                        continue
                    S2.add(e.target)
                    if _accepting(e) or q in B:
                        B2.add(e.target)
            if not S2:
                continue
            if B2 >= S2:  # breakpoint: every tracked run saw acceptance
                tgt = (frozenset(S2), frozenset())
                acc = True
            else:
                tgt = (frozenset(S2), frozenset(B2))
                acc = False
            moves.setdefault((tgt, acc), []).append(bits)
        edges = []
        for (tgt, acc) in sorted(moves, key=lambda k: (sorted(sorted(x) for x in k[0]), k[1])):
            if tgt not in final_index:
                fqueue.append(tgt)
            j = intern_final(tgt)
            guard = guard_from_terms([_minterm(b, nap) for b in moves[(tgt, acc)]])
            edges.append((guard, j, acc))
        final_edges[pair] = edges

    n_init = len(init_order)
    all_edges = []
    eps = []
    for subset in init_order:
        all_edges.append(tuple(
            Edge(g, j, frozenset({0}), 0) for g, j in init_edges[subset]))
        eps.append(tuple((n_init + final_index[p], 0) for p in seeds_of[subset]))
    for pair in final_order:
        all_edges.append(tuple(
            Edge(g, n_init + j, frozenset({1 if acc else 0}), 1 if acc else 0)
            for g, j, acc in final_edges[pair]))
        eps.append(())

    automaton = Automaton(
        ap_names=aut.ap_names,
        initial=0,
        edges=tuple(all_edges),
        eps=tuple(eps),
        acceptance="parity",
        num_priorities=2,
        name=(nba.name + " (limit-deterministic)") if nba.name else "",
        original_acceptance="buchi",
    )
    return Sldba(
        automaton=automaton,
        initial_part=frozenset(range(n_init)),
        final_part=frozenset(range(n_init, n_init + len(final_order))),
        source=aut,
        initial_sets={i: s for i, s in enumerate(init_order)},
        final_sets={n_init + i: p for i, p in enumerate(final_order)},
    )


# ---------------------------------------------------------------------------
# minimization passes
# ---------------------------------------------------------------------------

def _nonempty_states(edges, restrict=None):
    """States with a nonempty Buchi language in the given edge structure."""
    nodes = restrict if restrict is not None else set(range(len(edges)))
    succ = {v: [e.target for e in edges[v] if e.target in nodes] for v in nodes}
    comp_of = {}
    sccs = strongly_connected_components(succ)
    for k, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = k
    live = set()
    for v in nodes:
        for e in edges[v]:
            if e.target in nodes and _accepting(e) and comp_of[v] == comp_of[e.target]:
                if len(sccs[comp_of[v]]) > 1 or e.target == v:
                    live.add(comp_of[v])
    # states that can reach a live component
    good = set()
    for v in nodes:
        if comp_of[v] in live:
            good.add(v)
    changed = True
    while changed:
        changed = False
        for v in nodes:
            if v in good:
                continue
            if any(t in good for t in succ[v]):
                good.add(v)
                changed = True
    return good


def _rebuild(sldba, keep, redirect=None):
    """Drop states outside `keep`, apply `redirect` to edge targets, renumber."""
    aut = sldba.automaton
    redirect = redirect or {}

    def res(t):
        return redirect.get(t, t)

    order = [s for s in range(aut.num_states) if s in keep]
    newid = {s: i for i, s in enumerate(order)}
    edges = []
    eps = []
    for s in order:
        es = []
        for e in aut.edges[s]:
            t = res(e.target)
            if t in newid:
                es.append(Edge(e.guard, newid[t], e.acc_sets, e.priority))
        seen = set()
        eset = []
        for t, p in aut.eps_at(s):
            t = res(t)
            if t in newid and (newid[t], p) not in seen:
                seen.add((newid[t], p))
                eset.append((newid[t], p))
        edges.append(tuple(es))
        eps.append(tuple(eset))
    automaton = Automaton(
        ap_names=aut.ap_names,
        initial=newid[res(aut.initial)],
        edges=tuple(edges),
        eps=tuple(eps) if any(eps) else tuple(() for _ in order),
        acceptance=aut.acceptance,
        num_priorities=aut.num_priorities,
        name=aut.name,
        original_acceptance=aut.original_acceptance,
    )
    return Sldba(
        automaton=automaton,
        initial_part=frozenset(newid[s] for s in sldba.initial_part if s in newid),
        final_part=frozenset(newid[s] for s in sldba.final_part if s in newid),
        source=sldba.source,
        initial_sets={newid[s]: v for s, v in sldba.initial_sets.items() if s in newid},
        final_sets={newid[s]: v for s, v in sldba.final_sets.items() if s in newid},
    )


def _prune_unreachable(sldba):
    aut = sldba.automaton
    succ = {}
    for s in range(aut.num_states):
        succ[s] = [e.target for e in aut.edges[s]] + [t for t, _ in aut.eps_at(s)]
    keep = reachable_from(succ, [aut.initial])
    return _rebuild(sldba, keep)


def _pass_empty_subsume(sldba):
    aut = sldba.automaton
    good = _nonempty_states(aut.edges, set(sldba.final_part))
    keep = set(sldba.initial_part) | good
    return _prune_unreachable(_rebuild(sldba, keep))


def _refine(state_list, signature):
    """Partition refinement to a fixpoint; returns state -> block id."""
    block = {s: 0 for s in state_list}
    while True:
        sigs = {s: signature(s, block) for s in state_list}
        order = {}
        newblock = {}
        for s in state_list:  # stable: first-seen signature gets the lower id
            key = (block[s], sigs[s])
            if key not in order:
                order[key] = len(order)
            newblock[s] = order[key]
        if newblock == block:
            return block
        block = newblock


def _merge_blocks(sldba, block, members):
    redirect = {}
    by_block = {}
    for s in members:
        by_block.setdefault(block[s], []).append(s)
    for states in by_block.values():
        rep = min(states)
        for s in states:
            if s != rep:
                redirect[s] = rep
    if not redirect:
        return sldba
    keep = set(range(sldba.num_states)) - set(redirect)
    return _prune_unreachable(_rebuild(sldba, keep, redirect))


def _pass_bisim_final(sldba):
    aut = sldba.automaton
    nap = aut.num_aps
    final = sorted(sldba.final_part)

    def signature(s, block):
        sig = []
        for bits in _valuations(nap):
            hit = None
            for e in aut.edges[s]:
                if e.guard.satisfies(bits):
                    hit = (e.priority, block.get(e.target, -1 - e.target))
                    break
            sig.append(hit)
        return tuple(sig)

    block = _refine(final, signature)
    return _merge_blocks(sldba, block, final)


def _pass_bisim_initial(sldba):
    aut = sldba.automaton
    nap = aut.num_aps
    initial = sorted(sldba.initial_part)

    def signature(s, block):
        sig = []
        for bits in _valuations(nap):
            hit = None
            for e in aut.edges[s]:
                if e.guard.satisfies(bits):
                    hit = block.get(e.target, -1 - e.target)
                    break
            sig.append(hit)
        jumps = frozenset((t, p) for t, p in aut.eps_at(s))
        return (tuple(sig), jumps)

    block = _refine(initial, signature)
    return _merge_blocks(sldba, block, initial)


def _det_run_product(edges_a, start_a, edges_b, start_b, nap):
    """Reachable pair graph of two deterministic edge structures.

    Nodes are (a, b) with b possibly None when the second run has died.
    Edge annotations carry (a-edge accepting, b-edge accepting).
    """
    nodes = {}
    succ = {}
    queue = [(start_a, start_b)]
    nodes[(start_a, start_b)] = True
    while queue:
        a, b = queue.pop()
        moves = []
        for bits in _valuations(nap):
            ea = next((e for e in edges_a[a] if e.guard.satisfies(bits)), None)
            if ea is None:
                continue  # first run dies: no further difference witnesses
            eb = None
            if b is not None:
                eb = next((e for e in edges_b[b] if e.guard.satisfies(bits)), None)
            tgt = (ea.target, eb.target if eb is not None else None)
            moves.append((tgt, _accepting(ea), eb is not None and _accepting(eb)))
            if tgt not in nodes:
                nodes[tgt] = True
                queue.append(tgt)
        succ[(a, b)] = moves
    return succ


def _lang_included(edges_a, start_a, edges_b, start_b, nap, nonempty_a):
    """L(a) <= L(b) for deterministic Buchi structures (b may be partial)."""
    succ = _det_run_product(edges_a, start_a, edges_b, start_b, nap)
    for (a, b), moves in succ.items():
        if b is None and a in nonempty_a:
            return False
    # cycle with an a-accepting edge using only b-non-accepting edges
    restricted = {v: [t for t, acc_a, acc_b in ms if not acc_b] for v, ms in succ.items()}
    comp_of = {}
    sccs = strongly_connected_components(restricted)
    for k, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = k
    for v, ms in succ.items():
        for t, acc_a, acc_b in ms:
            if acc_b or not acc_a:
                continue
            if comp_of[t] == comp_of[v] and (len(sccs[comp_of[v]]) > 1 or t == v):
                return False
    return True


def _pass_lang_equiv_final(sldba):
    aut = sldba.automaton
    nap = aut.num_aps
    final = sorted(sldba.final_part)
    nonempty = _nonempty_states(aut.edges, set(sldba.final_part))

    classes = []  # list of (representative, members)
    for s in final:
        for k, (rep, members) in enumerate(classes):
            if _lang_included(aut.edges, s, aut.edges, rep, nap, nonempty) and \
               _lang_included(aut.edges, rep, aut.edges, s, nap, nonempty):
                members.append(s)
                break
        else:
            classes.append((s, [s]))
    block = {}
    for k, (rep, members) in enumerate(classes):
        for s in members:
            block[s] = k
    return _merge_blocks(sldba, block, final)


def _nba_included_in_final(nba, starts, sldba, f):
    """L_NBA(starts) <= L(final state f), decided exactly.

    The final part is deterministic, so the complement of L(f) is its
    co-Buchi reading; the intersection with the NBA is a one-pair Rabin
    emptiness check on the pair graph.
    """
    aut = sldba.automaton
    nap = aut.num_aps
    nba_nonempty = _nonempty_states(nba.edges)

    nodes = set()
    succ = {}
    queue = [(q, f) for q in sorted(starts)]
    nodes.update(queue)
    while queue:
        q, b = queue.pop()
        moves = []
        for bits in _valuations(nap):
            eb = None
            if b is not None:
                eb = next((e for e in aut.edges[b] if e.guard.satisfies(bits)), None)
            for ea in nba.edges[q]:
                if not ea.guard.satisfies(bits):
                    continue
                tgt = (ea.target, eb.target if eb is not None else None)
                moves.append((tgt, _accepting(ea), eb is not None and _accepting(eb)))
                if tgt not in nodes:
                    nodes.add(tgt)
                    queue.append(tgt)
        succ[(q, b)] = moves
    for (q, b) in nodes:
        if b is None and q in nba_nonempty:
            return False
    restricted = {v: [t for t, _, acc_b in succ[v] if not acc_b] for v in succ}
    comp_of = {}
    sccs = strongly_connected_components(restricted)
    for k, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = k
    for v in succ:
        for t, acc_a, acc_b in succ[v]:
            if acc_b or not acc_a:
                continue
            if comp_of.get(t) == comp_of.get(v) and (len(sccs[comp_of[v]]) > 1 or t == v):
                return False
    return True


def _pass_eps_jump(sldba):
    aut = sldba.automaton
    changed = {}
    for s in sorted(sldba.initial_part):
        T = sldba.initial_sets.get(s)
        if T is None:
            continue
        for f in sorted(sldba.final_part):
            SB = sldba.final_sets.get(f)
            if SB is None or not SB[0] <= T:
                continue
            if _nba_included_in_final(sldba.source, T, sldba, f):
                changed[s] = f
                break
    if not changed:
        return sldba
    edges = list(aut.edges)
    eps = list(aut.eps) if aut.eps else [() for _ in range(aut.num_states)]
    for s, f in changed.items():
        edges[s] = ()
        eps[s] = ((f, 0),)
    automaton = Automaton(
        ap_names=aut.ap_names,
        initial=aut.initial,
        edges=tuple(edges),
        eps=tuple(eps),
        acceptance=aut.acceptance,
        num_priorities=aut.num_priorities,
        name=aut.name,
        original_acceptance=aut.original_acceptance,
    )
    out = Sldba(
        automaton=automaton,
        initial_part=sldba.initial_part,
        final_part=sldba.final_part,
        source=sldba.source,
        initial_sets=sldba.initial_sets,
        final_sets=sldba.final_sets,
    )
    return _prune_unreachable(out)


_PASSES = {
    "empty-subsume": _pass_empty_subsume,
    "bisim-final": _pass_bisim_final,
    "bisim-initial": _pass_bisim_initial,
    "lang-equiv-final": _pass_lang_equiv_final,
    "eps-jump": _pass_eps_jump,
}


def minimize_sldba(sldba, passes=ALL_PASSES):
    """Apply the requested minimization passes in the given order."""
    for name in passes:
        if name not in _PASSES:
            raise ValueError(f"unknown minimization pass '{name}' (choose from {ALL_PASSES})")
        sldba = _PASSES[name](sldba)
    return sldba


# ---------------------------------------------------------------------------
# simulation game
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimulationGame:
    """3-color parity game: duplicator (even) replays the spoiler automaton.

    Move colors: 1 when the spoiler crosses an accepting edge, 2 when the
    duplicator answers with one, 0 otherwise.  The even player wins iff the
    duplicator accepts whenever the spoiler does, i.e. fair simulation.
    """

    game: ParityGame
    descriptions: tuple  # per node, human-readable

    @property
    def num_nodes(self):
        return self.game.num_nodes


def build_simulation_game(nba, sldba):
    """Fair-simulation game: `nba` (duplicator/even) vs `sldba` (spoiler/odd)."""
    dup = nba if nba.normalized() else normalize_to_parity(nba)
    spoiler = sldba.automaton if isinstance(sldba, Sldba) else sldba
    if not spoiler.normalized():
        spoiler = normalize_to_parity(spoiler)
    if dup.ap_names != spoiler.ap_names:
        raise ValueError("simulation game needs automata over the same propositions")
    nap = dup.num_aps

    nodes = {}
    order = []
    descs = []

    def intern(node, desc):
        if node not in nodes:
            nodes[node] = len(order)
            order.append(node)
            descs.append(desc)
        return nodes[node]

    EVEN_SINK = ("sink", EVEN)
    ODD_SINK = ("sink", ODD)
    init = ("s", spoiler.initial, dup.initial)
    intern(init, f"spoiler at {spoiler.initial} vs {dup.initial}")
    moves_of = {}
    queue = [init]
    while queue:
        node = queue.pop(0)
        if node in moves_of:
            continue
        moves = []
        if node == EVEN_SINK:
            moves = [(nodes[node], 0)]
        elif node == ODD_SINK:
            moves = [(nodes[node], 1)]
        elif node[0] == "s":
            _, p, q = node
            for t, prio in spoiler.eps_at(p):
                tgt = ("s", t, q)
                j = intern(tgt, f"spoiler at {t} vs {q}")
                moves.append((j, 1 if prio == 1 else 0))
                queue.append(tgt)
            for e in spoiler.edges[p]:
                for bits in _valuations(nap):
                    if not e.guard.satisfies(bits):
                        continue
                    tgt = ("d", e.target, q, bits)
                    j = intern(tgt, f"duplicator answers {bits:0{max(nap, 1)}b} at {q}")
                    c = 1 if e.priority == 1 else 0
                    if (j, c) not in moves:
                        moves.append((j, c))
                        queue.append(tgt)
            if not moves:
                j = intern(EVEN_SINK, "spoiler stuck")
                moves.append((j, 0))
                queue.append(EVEN_SINK)
        else:
            _, p, q, bits = node
            for e in dup.edges[q]:
                if not e.guard.satisfies(bits):
                    continue
                tgt = ("s", p, e.target)
                j = intern(tgt, f"spoiler at {p} vs {e.target}")
                c = 2 if e.priority == 1 else 0
                if (j, c) not in moves:
                    moves.append((j, c))
                    queue.append(tgt)
            if not moves:
                j = intern(ODD_SINK, "duplicator stuck")
                moves.append((j, 1))
                queue.append(ODD_SINK)
        moves_of[node] = moves

    owner = []
    all_moves = []
    for node in order:
        owner.append(EVEN if (node[0] == "d" or node == EVEN_SINK or node == ODD_SINK) else ODD)
        all_moves.append(tuple(moves_of[node]))
    game = ParityGame(
        owner=tuple(owner),
        moves=tuple(all_moves),
        initial=nodes[init],
    )
    return SimulationGame(game=game, descriptions=tuple(descs))


def certify_gfm(nba, passes=ALL_PASSES):
    """Build and minimize the SLDBA, then try to prove the NBA simulates it.

    Returns ``(certified, sldba, solution)``; when not certified the verdict
    is only "not proven" and the SLDBA is the safe automaton to use.
    """
    ld = minimize_sldba(nba_to_sldba(nba), passes)
    sim = build_simulation_game(nba, ld)
    solution = mcnaughton_solve(sim.game)
    certified = sim.game.initial in solution.win_even
    return certified, ld, solution
