"""Synchronous product of a model and a parity automaton, plus MEC analysis.

The automaton reads the label of the model's *successor* state; the very
first automaton move consumes the initial state's label during product
initialization.  For nondeterministic good-for-MDPs Buchi automata the
automaton choice is folded into the action menu: an action is a model action
together with one compatible automaton edge per successor in its support.
Epsilon edges become zero-step jump actions owned by the Max player.

Both the explicit product below and the lazy RL interpreter walk transitions
through :func:`product_moves`, so the two paths cannot drift apart.
"""

from dataclasses import dataclass

from .errors import InternalError, NondeterministicAutomatonOnGame
from .graphs import strongly_connected_components
from .hoa import check_deterministic, is_nondeterministic
from .model import MAX_PLAYER

DEAD = (-1, -1)  # automaton run died: rejecting sink
PRE_INIT = (-2, -2)  # synthetic state resolving the initial-label read


@dataclass(frozen=True)
class ProductAction:
    name: str
    branches: tuple  # of (probability, (model state, automaton state), priority)


def product_moves(model, aut, mstate, astate):
    """Action menu at a product state (shared transition semantics)."""
    acts = []
    for aname, dist in model.states[mstate].actions:
        per_succ = []
        for p, s2 in dist.support:
            edges = aut.edges_matching(astate, model.states[s2].label)
            per_succ.append((p, s2, edges))
        combos = [()]
        for _, _, edges in per_succ:
            opts = edges if edges else [None]
            combos = [c + (e,) for c in combos for e in opts]
        for k, combo in enumerate(combos):
            branches = []
            for (p, s2, _), e in zip(per_succ, combo):
                if e is None:
                    branches.append((p, DEAD, 0))
                else:
                    branches.append((p, (s2, e.target), e.priority))
            name = aname if len(combos) == 1 else f"{aname}#{k}"
            acts.append(ProductAction(name, tuple(branches)))
    for t, prio in aut.eps_at(astate):
        acts.append(ProductAction(f"eps->{t}", ((1.0, (mstate, t), prio),)))
    return tuple(acts)


def initial_moves(model, aut):
    """Resolve the automaton's read of the initial state's label.

    Returns a list of (entry name, (model state, automaton state), priority);
    deterministic automata yield exactly one entry.
    """
    bits = model.states[model.initial].label
    entries = [
        (f"init->{e.target}", (model.initial, e.target), e.priority)
        for e in aut.edges_matching(aut.initial, bits)
    ]
    for t, prio in aut.eps_at(aut.initial):
        # jumping before reading is also an initial resolution
        for e in aut.edges_matching(t, bits):
            entries.append((f"eps{t}->{e.target}", (model.initial, e.target), e.priority))
    if not entries:
        entries = [("init->dead", DEAD, 0)]
    return entries


@dataclass(frozen=True)
class Product:
    model: object
    automaton: object
    states: tuple  # (model state, automaton state) pairs, DEAD, or PRE_INIT
    owners: tuple
    actions: tuple  # per state: tuple of ProductAction with integer branch targets
    initial: int
    index: dict  # state pair -> product index

    @property
    def num_states(self):
        return len(self.states)

    def state_description(self, i):
        st = self.states[i]
        if st == DEAD:
            return "(dead)"
        if st == PRE_INIT:
            return "(init)"
        return f"{self.model.state_description(st[0])}@q{st[1]}"

    def fingerprint(self):
        parts = [self.model.fingerprint(), self.automaton.fingerprint()]
        return "\n--\n".join(parts)


def build_product(model, aut):
    """Materialize the reachable synchronous product."""
    if not aut.normalized():
        raise InternalError("automaton must be normalized to parity before composition")
    deterministic, _ = check_deterministic(aut)
    nondet = is_nondeterministic(aut) or bool(aut.eps)
    if model.model_kind == "smg":
        if not deterministic:
            raise NondeterministicAutomatonOnGame(
                "stochastic games need a deterministic automaton")
    elif nondet or not deterministic:
        # good-for-MDPs composition is only sound for Buchi acceptance
        if aut.max_priority() > 1:
            raise NondeterministicAutomatonOnGame(
                "nondeterministic automata on MDPs must be Buchi")

    index = {}
    order = []
    owners = []
    all_actions = []

    def intern(pair):
        if pair not in index:
            index[pair] = len(order)
            order.append(pair)
        return index[pair]

    entries = initial_moves(model, aut)
    if len(entries) == 1:
        initial_pair = entries[0][1]
        intern(initial_pair)
        pre_init = None
    else:
        pre_init = intern(PRE_INIT)
        for _, pair, _ in entries:
            intern(pair)

    head = 0
    while head < len(order):
        pair = order[head]
        head += 1
        if pair == DEAD:
            owners.append(MAX_PLAYER)
            all_actions.append((ProductAction("stay", ((1.0, head - 1, 0),)),))
            continue
        if pair == PRE_INIT:
            owners.append(MAX_PLAYER)
            acts = tuple(
                ProductAction(name, ((1.0, intern(p), prio),))
                for name, p, prio in entries
            )
            all_actions.append(acts)
            continue
        mstate, astate = pair
        owners.append(model.states[mstate].owner)
        acts = []
        for act in product_moves(model, aut, mstate, astate):
            branches = tuple((p, intern(t), prio) for p, t, prio in act.branches)
            acts.append(ProductAction(act.name, branches))
        all_actions.append(tuple(acts))

    return Product(
        model=model,
        automaton=aut,
        states=tuple(order),
        owners=tuple(owners),
        actions=tuple(all_actions),
        initial=0,
        index=index,
    )


# ---------------------------------------------------------------------------
# maximal end components
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mec:
    states: frozenset
    actions: dict  # state -> tuple of retained action indices


def mec_decompose(actions, states=None, retained=None):
    """Iterative SCC pruning on (state, action-subset) structure.

    `actions` is indexable per state, each a sequence with `.branches`.
    Optional `states`/`retained` restrict the analysis to a sub-arena.
    """
    if states is None:
        states = set(range(len(actions)))
    if retained is None:
        retained = {s: tuple(range(len(actions[s]))) for s in states}
    else:
        retained = {s: tuple(retained[s]) for s in states}
    alive = {s for s in states if retained[s]}

    while True:
        succ = {}
        for s in alive:
            succ[s] = [t for a in retained[s] for _, t, _ in actions[s][a].branches
                       if t in alive]
        comp_of = {}
        sccs = strongly_connected_components(succ)
        for k, comp in enumerate(sccs):
            for v in comp:
                comp_of[v] = k
        changed = False
        new_retained = {}
        for s in alive:
            keep = []
            for a in retained[s]:
                targets = [t for _, t, _ in actions[s][a].branches]
                if all(t in alive and comp_of[t] == comp_of[s] for t in targets):
                    keep.append(a)
                else:
                    changed = True
            new_retained[s] = tuple(keep)
        retained = new_retained
        new_alive = {s for s in alive if retained[s]}
        if new_alive != alive:
            changed = True
            alive = new_alive
        if not changed:
            break

    mecs = []
    seen = set()
    succ = {s: [t for a in retained[s] for _, t, _ in actions[s][a].branches] for s in alive}
    for comp in strongly_connected_components(succ):
        comp_set = frozenset(comp)
        if comp_set & seen:
            continue
        if not any(retained[s] for s in comp):
            continue
        # a singleton needs a self-loop action to be an end component
        if len(comp) == 1:
            s = comp[0]
            if not any(all(t == s for _, t, _ in actions[s][a].branches) for a in retained[s]):
                continue
        mecs.append(Mec(comp_set, {s: retained[s] for s in comp}))
        seen |= comp_set
    mecs.sort(key=lambda m: min(m.states))
    return mecs
