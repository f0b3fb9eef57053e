"""The semantic model: states, action menus, transitions, labels, rewards.

States are explored breadth-first from the initial valuation, so two builds
of the same program produce identical state orderings.  Models are immutable
after construction.
"""

from dataclasses import dataclass, field

from . import prism
from .errors import DeadlockState, MissingDecision, ProbabilitySumError, UnassignedAction

MAX_PLAYER = 0
MIN_PLAYER = 1

PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Distribution:
    """Probability distribution over successor state indices."""

    support: tuple  # of (probability, successor index)

    def __post_init__(self):
        assert self.support, "empty distribution"

    def successors(self):
        return [s for _, s in self.support]


@dataclass(frozen=True)
class StateRecord:
    owner: int  # MAX_PLAYER or MIN_PLAYER
    label: int  # bitset over ap_names
    actions: tuple  # of (action name, Distribution)
    valuation: tuple  # variable values, ordered as Model.variables

    def action_names(self):
        return [a for a, _ in self.actions]

    def find_action(self, name):
        for i, (a, _) in enumerate(self.actions):
            if a == name:
                return i
        return None


@dataclass(frozen=True)
class RewardStruct:
    name: str
    entries: dict  # (state index, action name) -> reward


@dataclass(frozen=True)
class Model:
    model_kind: str  # 'mdp' or 'smg'
    variables: tuple  # variable names, declaration order
    ap_names: tuple
    states: tuple  # of StateRecord
    initial: int = 0
    reward_structs: tuple = ()

    def valuation_dict(self, idx):
        return dict(zip(self.variables, self.states[idx].valuation))

    def state_description(self, idx):
        vals = ",".join(f"{n}={v}" for n, v in zip(self.variables, self.states[idx].valuation))
        return f"({vals})"

    def fingerprint(self):
        """Stable textual digest input describing the whole model."""
        parts = [self.model_kind, ",".join(self.variables), ",".join(self.ap_names)]
        for i, st in enumerate(self.states):
            acts = ";".join(
                f"{a}:" + "|".join(f"{p:.12g}->{s}" for p, s in d.support)
                for a, d in st.actions
            )
            parts.append(f"{i}/{st.owner}/{st.label}/{st.valuation}/{acts}")
        return "\n".join(parts)


def label_bitset(valuation, label_defs, constants):
    """Bit i is set iff proposition i holds under the valuation."""
    bits = 0
    for i, (_, expr) in enumerate(label_defs):
        if prism.eval_expr(expr, valuation, constants):
            bits |= 1 << i
    return bits


def _enabled_branches(command, valuation, consts, filename):
    """Expand a command's update branches at a concrete state."""
    branches = []
    total = 0.0
    for br in command.branches:
        p = 1.0 if br.prob is None else float(prism.eval_expr(br.prob, valuation, consts))
        if p < 0:
            raise ProbabilitySumError(
                f"{filename}:{command.pos[0]}: negative branch probability {p}")
        total += p
        if p == 0.0:
            continue
        branches.append((p, br.updates))
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise ProbabilitySumError(
            f"{filename}:{command.pos[0]}: branch probabilities sum to {total!r}")
    return branches


def build_model(program):
    """Explore the reachable states of an elaborated PRISM program."""
    consts = program.const_values
    var_order = program.var_order
    var_bounds = {n: program.var_info[n][:2] for n in var_order}
    filename = program.filename

    label_defs = [(l.name, l.expr) for l in program.labels]
    ap_names = tuple(n for n, _ in label_defs)

    # which modules synchronize on which labeled action
    all_commands = [c for m in program.modules for c in m.commands]
    module_alphabet = {m.name: {c.action for c in m.commands if c.action} for m in program.modules}
    action_order = []
    for c in all_commands:
        if c.action and c.action not in action_order:
            action_order.append(c.action)

    if program.model_kind == "smg":
        for c in all_commands:
            if not c.action:
                raise UnassignedAction(
                    f"{filename}:{c.pos[0]}: unlabeled command cannot be assigned to a player")
        for a in action_order:
            if a not in program.action_player:
                raise UnassignedAction(f"action '{a}' is not assigned to any player")

    init = tuple(program.var_info[n][2] for n in var_order)
    index = {init: 0}
    order = [init]
    records = []
    queue = [init]

    def apply_updates(valu_dict, updates, pos):
        new = dict(valu_dict)
        for name, expr in updates:
            v = prism.eval_expr(expr, valu_dict, consts)
            low, high = var_bounds[name]
            if not (low <= v <= high):
                raise ProbabilitySumError(
                    f"{filename}:{pos[0]}: update drives '{name}' to {v}, "
                    f"outside [{low}..{high}]")
            new[name] = v
        return tuple(new[n] for n in var_order)

    def intern(valuation):
        if valuation not in index:
            index[valuation] = len(order)
            order.append(valuation)
            queue.append(valuation)
        return index[valuation]

    head = 0
    while head < len(queue):
        valuation = queue[head]
        head += 1
        valu_dict = dict(zip(var_order, valuation))
        actions = []

        # synchronized labeled actions, in first-occurrence command order
        for act in action_order:
            participants = [m for m in program.modules if act in module_alphabet[m.name]]
            per_module = []
            blocked = False
            for m in participants:
                enabled = [c for c in m.commands
                           if c.action == act and prism.eval_expr(c.guard, valu_dict, consts)]
                if not enabled:
                    blocked = True
                    break
                per_module.append(enabled)
            if blocked:
                continue
            combos = [[]]
            for choices in per_module:
                combos = [prefix + [c] for prefix in combos for c in choices]
            for k, combo in enumerate(combos):
                branch_sets = [_enabled_branches(c, valu_dict, consts, filename) for c in combo]
                joint = [(1.0, valu_dict)]
                for cmd, branches in zip(combo, branch_sets):
                    joint = [
                        (p * q, dict(zip(var_order, apply_updates(partial, upds, cmd.pos))))
                        for p, partial in joint
                        for q, upds in branches
                    ]
                dist = {}
                for p, target in joint:
                    t = intern(tuple(target[n] for n in var_order))
                    dist[t] = dist.get(t, 0.0) + p
                name = act if len(combos) == 1 else f"{act}#{k}"
                actions.append((name, Distribution(tuple((p, t) for t, p in dist.items()))))

        # unlabeled commands interleave, one action each
        tau = 0
        for m in program.modules:
            for c in m.commands:
                if c.action:
                    continue
                if not prism.eval_expr(c.guard, valu_dict, consts):
                    continue
                dist = {}
                for p, upds in _enabled_branches(c, valu_dict, consts, filename):
                    t = intern(apply_updates(valu_dict, upds, c.pos))
                    dist[t] = dist.get(t, 0.0) + p
                actions.append((f"tau{tau}", Distribution(tuple((p, t) for t, p in dist.items()))))
                tau += 1

        if not actions:
            vals = ",".join(f"{n}={v}" for n, v in zip(var_order, valuation))
            raise DeadlockState(f"deadlock in state ({vals})")

        if program.model_kind == "smg":
            owners = {program.action_player[a.split("#")[0]] for a, _ in actions}
            if len(owners) > 1:
                raise UnassignedAction(
                    f"state ({valuation}) mixes actions of players {sorted(owners)}")
            player_order = [p.name for p in program.players]
            owner = MAX_PLAYER if player_order.index(owners.pop()) == 0 else MIN_PLAYER
        else:
            owner = MAX_PLAYER

        records.append(StateRecord(
            owner=owner,
            label=label_bitset(valu_dict, label_defs, consts),
            actions=tuple(actions),
            valuation=valuation,
        ))

    rewards = []
    for rb in program.rewards:
        entries = {}
        for idx, rec in enumerate(records):
            valu_dict = dict(zip(var_order, rec.valuation))
            for item in rb.items:
                if not prism.eval_expr(item.guard, valu_dict, consts):
                    continue
                for a, _ in rec.actions:
                    if a.split("#")[0] == item.action:
                        key = (idx, a)
                        entries[key] = entries.get(key, 0.0) + float(
                            prism.eval_expr(item.expr, valu_dict, consts))
        rewards.append(RewardStruct(rb.name, entries))

    return Model(
        model_kind=program.model_kind,
        variables=tuple(var_order),
        ap_names=ap_names,
        states=tuple(records),
        initial=0,
        reward_structs=tuple(rewards),
    )


@dataclass(frozen=True)
class Strategy:
    """Positional deterministic action choice, per covered player."""

    decisions: dict  # state index -> action name
    players: frozenset = frozenset({MAX_PLAYER})

    def action_at(self, state_idx):
        return self.decisions.get(state_idx)


def restrict_to_strategy(model, sigma):
    """Keep exactly one action at each state covered by the strategy.

    Works on anything with Model-shaped ``states`` records; states owned by
    uncovered players keep their full menus.
    """
    new_states = []
    for idx, rec in enumerate(model.states):
        if rec.owner in sigma.players:
            choice = sigma.action_at(idx)
            if choice is None:
                raise MissingDecision(f"strategy has no decision for state {idx}")
            pos = rec.find_action(choice)
            if pos is None:
                raise MissingDecision(f"action '{choice}' is not enabled in state {idx}")
            actions = (rec.actions[pos],)
        else:
            actions = rec.actions
        new_states.append(StateRecord(rec.owner, rec.label, actions, rec.valuation))
    return Model(
        model_kind=model.model_kind,
        variables=model.variables,
        ap_names=model.ap_names,
        states=tuple(new_states),
        initial=model.initial,
        reward_structs=model.reward_structs,
    )
