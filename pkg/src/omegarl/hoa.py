"""HOA v1 front end and the transition-labelled automaton it produces.

Labels and acceptance marks live on transitions, never on states.  The five
supported acceptance conditions (Buchi, co-Buchi, Rabin 1, Streett 1, parity
max odd) all normalize to max-odd parity priorities on edges without touching
the transition structure.  Nondeterministic automata must be Buchi.

The ``X-epsilon:`` header is this tool's documented extension for epsilon
edges (``X-epsilon: src tgt priority``); standard tools ignore it.  See
docs/hoa-subset.md.
"""

from dataclasses import dataclass, field, replace

from .errors import HoaSyntaxError, UnsupportedAcceptance, UnsupportedFeature

MAX_APS = 16


# ---------------------------------------------------------------------------
# guards: canonical sum-of-products over AP literals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Guard:
    """Boolean function over AP bitsets, stored as sorted product terms.

    Each term is a (positive mask, negative mask) pair; the guard is the
    disjunction of its terms.  ``()`` is false, ``((0, 0),)`` is true.
    """

    terms: tuple

    def satisfies(self, bits):
        return any((bits & p) == p and (bits & n) == 0 for p, n in self.terms)

    def is_false(self):
        return not self.terms

    def to_hoa(self):
        if not self.terms:
            return "f"
        if self.terms == ((0, 0),):
            return "t"
        parts = []
        for pos, neg in self.terms:
            lits = []
            i = 0
            m = pos | neg
            while m >> i:
                if (pos >> i) & 1:
                    lits.append(str(i))
                elif (neg >> i) & 1:
                    lits.append(f"!{i}")
                i += 1
            parts.append("&".join(lits) if lits else "t")
        return " | ".join(parts)

    def __str__(self):
        return self.to_hoa()


def _canon_terms(terms):
    kept = []
    for p, n in terms:
        if p & n:
            continue  # contradictory literal pair
        kept.append((p, n))
    # absorption: a weaker term subsumes every strengthening of it
    kept = sorted(set(kept))
    out = []
    for t in kept:
        if any(o != t and (o[0] & t[0]) == o[0] and (o[1] & t[1]) == o[1] for o in kept):
            continue
        out.append(t)
    return tuple(sorted(out))


def guard_true():
    return Guard(((0, 0),))


def guard_false():
    return Guard(())


def guard_from_terms(terms):
    return Guard(_canon_terms(terms))


def guard_and(a, b):
    return guard_from_terms(
        [(p1 | p2, n1 | n2) for p1, n1 in a.terms for p2, n2 in b.terms])


def guard_or(a, b):
    return guard_from_terms(list(a.terms) + list(b.terms))


def guard_literal(ap_index, positive=True):
    bit = 1 << ap_index
    return Guard(((bit, 0),) if positive else ((0, bit),))


def guards_sem_equal(a, b, num_aps):
    return all(a.satisfies(v) == b.satisfies(v) for v in range(1 << num_aps))


# ---------------------------------------------------------------------------
# automaton
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    guard: Guard
    target: int
    acc_sets: frozenset = frozenset()
    priority: object = None  # int after parity normalization


@dataclass(frozen=True)
class Automaton:
    ap_names: tuple
    initial: int
    edges: tuple  # per state: tuple of Edge
    eps: tuple = ()  # per state: tuple of (target, priority); () when absent
    acceptance: str = "buchi"  # buchi | cobuchi | rabin1 | streett1 | parity
    num_priorities: int = 0  # parity colors; 0 for non-parity
    name: str = ""
    original_acceptance: str = field(default="", compare=False)

    @property
    def num_states(self):
        return len(self.edges)

    @property
    def num_aps(self):
        return len(self.ap_names)

    def eps_at(self, state):
        return self.eps[state] if self.eps else ()

    def normalized(self):
        return all(e.priority is not None for es in self.edges for e in es)

    def edges_matching(self, state, bits):
        return [e for e in self.edges[state] if e.guard.satisfies(bits)]

    def max_priority(self):
        prios = [e.priority for es in self.edges for e in es if e.priority is not None]
        prios += [p for es in self.eps for _, p in es] if self.eps else []
        return max(prios, default=0)

    def fingerprint(self):
        parts = [",".join(self.ap_names), str(self.initial), self.acceptance]
        for i, es in enumerate(self.edges):
            for e in es:
                parts.append(f"{i}-[{e.guard}]->{e.target}/{sorted(e.acc_sets)}/{e.priority}")
            for t, p in self.eps_at(i):
                parts.append(f"{i}-eps->{t}/{p}")
        return "\n".join(parts)


def check_deterministic(aut):
    """Guards pairwise disjoint and jointly total at every state.

    Returns ``(True, None)`` or ``(False, (state, valuation bits, reason))``.
    """
    for s in range(aut.num_states):
        if aut.eps_at(s):
            return False, (s, 0, "epsilon edge")
        for bits in range(1 << aut.num_aps):
            hits = sum(1 for e in aut.edges[s] if e.guard.satisfies(bits))
            if hits > 1:
                return False, (s, bits, "overlapping guards")
            if hits == 0:
                return False, (s, bits, "no edge for valuation")
    return True, None


def is_nondeterministic(aut):
    """Overlapping guards or epsilon edges (partiality alone does not count)."""
    for s in range(aut.num_states):
        if aut.eps_at(s):
            return True
        es = aut.edges[s]
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                g = guard_and(es[i].guard, es[j].guard)
                if not g.is_false():
                    return True
    return False


# ---------------------------------------------------------------------------
# acceptance formulas
# ---------------------------------------------------------------------------

def _acc_atom(kind, idx):
    return (kind, idx)


def _acc_normal(node):
    if node[0] in ("Inf", "Fin"):
        return node
    op, parts = node[0], node[1]
    flat = []
    for p in parts:
        q = _acc_normal(p)
        if q[0] == op:
            flat.extend(q[1])
        else:
            flat.append(q)
    return (op, tuple(sorted(flat)))


def parity_max_odd_formula(n):
    node = _acc_atom("Fin", 0)
    for c in range(1, n):
        node = ("|", (_acc_atom("Inf", c), node)) if c % 2 else ("&", (_acc_atom("Fin", c), node))
    return _acc_normal(node)


def _acc_to_str(node):
    if node[0] == "Inf":
        return f"Inf({node[1]})"
    if node[0] == "Fin":
        return f"Fin({node[1]})"
    op = f" {node[0]} "
    parts = []
    for p in node[1]:
        s = _acc_to_str(p)
        if p[0] not in ("Inf", "Fin") and p[0] != node[0]:
            s = f"({s})"
        parts.append(s)
    return op.join(parts)


def acceptance_formula(kind, n):
    if kind == "buchi":
        return "1 Inf(0)"
    if kind == "cobuchi":
        return "1 Fin(0)"
    if kind == "rabin1":
        return "2 Fin(0) & Inf(1)"
    if kind == "streett1":
        return "2 Fin(0) | Inf(1)"
    if kind == "parity":
        return f"{n} {_acc_to_str(parity_max_odd_formula(n))}"
    raise ValueError(kind)


def acc_name_string(kind, n):
    return {
        "buchi": "Buchi",
        "cobuchi": "co-Buchi",
        "rabin1": "Rabin 1",
        "streett1": "Streett 1",
    }.get(kind, f"parity max odd {n}")


class _AccParser:
    def __init__(self, text, filename):
        self.toks = text.replace("(", " ( ").replace(")", " ) ").replace("&", " & ").replace("|", " | ").split()
        self.i = 0
        self.filename = filename

    def parse(self):
        node = self._or()
        if self.i != len(self.toks):
            raise HoaSyntaxError("trailing tokens in Acceptance", self.filename)
        return _acc_normal(node)

    def _or(self):
        n = self._and()
        while self.i < len(self.toks) and self.toks[self.i] == "|":
            self.i += 1
            n = ("|", (n, self._and()))
        return n

    def _and(self):
        n = self._prim()
        while self.i < len(self.toks) and self.toks[self.i] == "&":
            self.i += 1
            n = ("&", (n, self._prim()))
        return n

    def _prim(self):
        if self.i >= len(self.toks):
            raise HoaSyntaxError("truncated Acceptance formula", self.filename)
        t = self.toks[self.i]
        self.i += 1
        if t == "(":
            n = self._or()
            if self.i >= len(self.toks) or self.toks[self.i] != ")":
                raise HoaSyntaxError("unbalanced Acceptance parentheses", self.filename)
            self.i += 1
            return n
        for kind in ("Inf", "Fin"):
            if t.startswith(kind):
                body = t[len(kind):]
                if body == "" and self.i < len(self.toks) and self.toks[self.i] == "(":
                    # tokenizer split "Inf (0)" forms
                    self.i += 1
                    body = self.toks[self.i]
                    self.i += 1
                    if self.toks[self.i] != ")":
                        raise HoaSyntaxError("malformed acceptance atom", self.filename)
                    self.i += 1
                    return _acc_atom(kind, int(body))
                if body.startswith("(") and body.endswith(")"):
                    inner = body[1:-1]
                    if inner.startswith("!"):
                        raise UnsupportedFeature(
                            "negated acceptance sets are not supported", self.filename)
                    return _acc_atom(kind, int(inner))
        raise HoaSyntaxError(f"cannot parse acceptance token '{t}'", self.filename)


_KNOWN_ACC = [
    ("buchi", 1, lambda n: _acc_normal(_acc_atom("Inf", 0))),
    ("cobuchi", 1, lambda n: _acc_normal(_acc_atom("Fin", 0))),
    ("rabin1", 2, lambda n: _acc_normal(("&", (_acc_atom("Fin", 0), _acc_atom("Inf", 1))))),
    ("streett1", 2, lambda n: _acc_normal(("|", (_acc_atom("Fin", 0), _acc_atom("Inf", 1))))),
    ("parity", None, parity_max_odd_formula),
]

_ACC_NAMES = {
    "Buchi": "buchi",
    "co-Buchi": "cobuchi",
    "Rabin 1": "rabin1",
    "Streett 1": "streett1",
}


def classify_acceptance(num_sets, formula_text, acc_name, filename):
    """Map a HOA acceptance header to one of the five supported kinds.

    An ``acc-name:`` header takes precedence (it disambiguates Streett 1 from
    2-color parity, which share a formula); the formula must then match that
    name's canonical shape.
    """
    formula = _AccParser(formula_text, filename).parse()

    if acc_name:
        parts = acc_name.split()
        if parts[0] == "parity":
            if parts[1:3] != ["max", "odd"]:
                raise UnsupportedAcceptance(
                    f"only max-odd parity is supported, not '{acc_name}' "
                    "(convert with an external tool)")
            kind = "parity"
        elif acc_name in _ACC_NAMES:
            kind = _ACC_NAMES[acc_name]
        elif parts[0].startswith("generalized"):
            raise UnsupportedFeature(
                "Generalized acceptance conditions are not supported", filename)
        else:
            raise UnsupportedAcceptance(f"unsupported acc-name '{acc_name}'")
        for k, sets, make in _KNOWN_ACC:
            if k == kind and (sets is None or sets == num_sets) and formula == make(num_sets):
                return kind, num_sets
        raise HoaSyntaxError(
            f"Acceptance formula '{formula_text}' does not match acc-name '{acc_name}'",
            filename)

    for kind, sets, make in _KNOWN_ACC:
        if (sets is None or sets == num_sets) and formula == make(num_sets):
            return kind, num_sets
    # a recognizable wrong-polarity parity formula gets a pointed message
    for other in ("min even", "min odd", "max even"):
        n = other.split()
        node = _parity_formula_generic(num_sets, n[0], n[1])
        if node is not None and formula == node:
            raise UnsupportedAcceptance(
                f"only max-odd parity is supported, not 'parity {other}'")
    raise UnsupportedAcceptance(
        f"unsupported acceptance condition '{formula_text}'; supported: Buchi, co-Buchi, "
        "Rabin 1, Streett 1, parity max odd")


def _parity_formula_generic(n, direction, goodness):
    if n < 1:
        return None
    colors = list(range(n))
    if direction == "max":
        order = colors  # build bottom-up from 0
        good = (lambda c: c % 2 == 0) if goodness == "even" else (lambda c: c % 2 == 1)
        node = _acc_atom("Inf" if good(0) else "Fin", 0)
        for c in order[1:]:
            node = ("|", (_acc_atom("Inf", c), node)) if good(c) else ("&", (_acc_atom("Fin", c), node))
        return _acc_normal(node)
    # min parity nests from the highest color inward
    good = (lambda c: c % 2 == 0) if goodness == "even" else (lambda c: c % 2 == 1)
    node = _acc_atom("Inf" if good(n - 1) else "Fin", n - 1)
    for c in reversed(colors[:-1]):
        node = ("|", (_acc_atom("Inf", c), node)) if good(c) else ("&", (_acc_atom("Fin", c), node))
    return _acc_normal(node)


# ---------------------------------------------------------------------------
# HOA parsing
# ---------------------------------------------------------------------------

def _hoa_tokens(text, filename):
    toks = []
    i, line = 0, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                raise HoaSyntaxError("unterminated comment", filename, line)
            line += text.count("\n", i, j)
            i = j + 2
            continue
        if c == '"':
            j = i + 1
            buf = []
            while j < n and text[j] != '"':
                if text[j] == "\\":
                    j += 1
                buf.append(text[j])
                j += 1
            if j >= n:
                raise HoaSyntaxError("unterminated string", filename, line)
            toks.append(("string", "".join(buf), line))
            i = j + 1
            continue
        if text.startswith("--", i):
            j = text.find("--", i + 2)
            word = text[i:j + 2]
            toks.append(("marker", word, line))
            i = j + 2
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", text[i:j], line))
            i = j
            continue
        if c.isalpha() or c in "_@":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_-@."):
                j += 1
            word = text[i:j]
            if j < n and text[j] == ":" and not word.startswith("@"):
                toks.append(("header", word, line))
                i = j + 1
            else:
                toks.append(("word", word, line))
                i = j
            continue
        if c in "[](){}!&|":
            toks.append(("sym", c, line))
            i += 1
            continue
        raise HoaSyntaxError(f"unexpected character {c!r}", filename, line)
    toks.append(("eof", "", line))
    return toks


class _LabelParser:
    def __init__(self, toks, pos, aliases, num_aps, filename, line):
        self.toks = toks
        self.i = pos
        self.aliases = aliases
        self.num_aps = num_aps
        self.filename = filename
        self.line = line

    def parse(self):
        g = self._or()
        return g, self.i

    def _or(self):
        g = self._and()
        while self.toks[self.i][:2] == ("sym", "|"):
            self.i += 1
            g = guard_or(g, self._and())
        return g

    def _and(self):
        g = self._unary()
        while self.toks[self.i][:2] == ("sym", "&"):
            self.i += 1
            g = guard_and(g, self._unary())
        return g

    def _unary(self):
        kind, text, line = self.toks[self.i]
        if (kind, text) == ("sym", "!"):
            self.i += 1
            return self._negate(self._unary())
        if (kind, text) == ("sym", "("):
            self.i += 1
            g = self._or()
            if self.toks[self.i][:2] != ("sym", ")"):
                raise HoaSyntaxError("expected ')' in label", self.filename, line)
            self.i += 1
            return g
        if kind == "int":
            self.i += 1
            idx = int(text)
            if idx >= self.num_aps:
                raise HoaSyntaxError(f"AP index {idx} out of range", self.filename, line)
            return guard_literal(idx)
        if kind == "word" and text == "t":
            self.i += 1
            return guard_true()
        if kind == "word" and text == "f":
            self.i += 1
            return guard_false()
        if kind == "word" and text.startswith("@"):
            self.i += 1
            if text not in self.aliases:
                raise HoaSyntaxError(f"unknown alias '{text}'", self.filename, line)
            return self.aliases[text]
        raise HoaSyntaxError(f"cannot parse label near '{text}'", self.filename, line)

    def _negate(self, g):
        # De Morgan over the term list: complement = AND over terms of
        # (OR over negated literals); expand back to DNF
        result = guard_true()
        for pos, neg in g.terms:
            terms = []
            i = 0
            m = pos | neg
            while m >> i:
                if (pos >> i) & 1:
                    terms.append((0, 1 << i))
                elif (neg >> i) & 1:
                    terms.append((1 << i, 0))
                i += 1
            if not terms:
                return guard_false()  # negating a true term
            result = guard_and(result, guard_from_terms(terms))
        if not g.terms:
            return guard_true()
        return result


def parse_hoa(text, filename="<input>"):
    toks = _hoa_tokens(text, filename)
    i = 0

    def tok():
        return toks[i]

    header_seen = {}
    num_states = None
    start = None
    ap_names = None
    aliases = {}
    acc_sets_count = None
    acc_formula = None
    acc_name = ""
    name = ""
    eps_decls = []

    if toks[0][:2] != ("header", "HOA"):
        raise HoaSyntaxError("file does not start with 'HOA:'", filename, toks[0][2])
    i = 1
    if tok()[0] != "word" or tok()[1] != "v1":
        raise HoaSyntaxError("only HOA v1 is supported", filename, tok()[2])
    i += 1

    while tok()[0] != "marker":
        kind, text_, line = tok()
        if kind != "header":
            raise HoaSyntaxError(f"expected a header, found '{text_}'", filename, line)
        h = text_
        i += 1
        if h in header_seen and h not in ("Alias", "X-epsilon"):
            raise HoaSyntaxError(f"duplicate header '{h}:'", filename, line)
        header_seen[h] = True
        if h == "States":
            num_states = int(tok()[1])
            i += 1
        elif h == "Start":
            if start is not None:
                raise UnsupportedFeature("multiple Start: headers", filename, line)
            start = int(tok()[1])
            i += 1
            if tok()[:2] == ("sym", "&") or tok()[0] == "int":
                raise UnsupportedFeature("multiple initial states", filename, line)
        elif h == "AP":
            n_aps = int(tok()[1])
            i += 1
            names = []
            for _ in range(n_aps):
                if tok()[0] != "string":
                    raise HoaSyntaxError("AP names must be quoted", filename, line)
                names.append(tok()[1])
                i += 1
            if n_aps > MAX_APS:
                raise UnsupportedFeature(
                    f"{n_aps} atomic propositions exceed the cap of {MAX_APS}", filename, line)
            ap_names = tuple(names)
        elif h == "Alias":
            alias_name = tok()[1]
            i += 1
            p = _LabelParser(toks, i, aliases, len(ap_names or ()), filename, line)
            g, i = p.parse()
            aliases[alias_name] = g
        elif h == "Acceptance":
            acc_sets_count = int(tok()[1])
            i += 1
            buf = []
            while tok()[0] != "header" and tok()[0] != "marker":
                k, t, _ = tok()
                buf.append(t)
                i += 1
            acc_formula = " ".join(buf)
        elif h == "acc-name":
            buf = []
            while tok()[0] in ("word", "int"):
                buf.append(tok()[1])
                i += 1
            acc_name = " ".join(buf)
        elif h == "name":
            name = tok()[1]
            i += 1
        elif h == "tool":
            while tok()[0] == "string":
                i += 1
        elif h == "properties":
            while tok()[0] == "word":
                i += 1
        elif h == "X-epsilon":
            src = int(tok()[1]); i += 1
            tgt = int(tok()[1]); i += 1
            prio = int(tok()[1]); i += 1
            eps_decls.append((src, tgt, prio))
        elif h[0].isupper():
            raise UnsupportedFeature(f"unsupported header '{h}:'", filename, line)
        else:
            while tok()[0] in ("word", "int", "string"):
                i += 1

    if tok()[1] != "--BODY--":
        raise HoaSyntaxError("expected --BODY--", filename, tok()[2])
    i += 1
    if ap_names is None:
        ap_names = ()
    if acc_formula is None:
        raise HoaSyntaxError("missing Acceptance: header", filename, 0)
    if start is None:
        raise HoaSyntaxError("missing Start: header", filename, 0)

    kind_, nprio = classify_acceptance(acc_sets_count, acc_formula, acc_name, filename)

    edges = {}
    state_order = []
    cur = None
    while tok()[1] != "--END--":
        k, t, line = tok()
        if k == "header" and t == "State":
            i += 1
            if tok()[:2] == ("sym", "["):
                raise UnsupportedFeature("state labels are not supported", filename, line)
            cur = int(tok()[1])
            i += 1
            if tok()[0] == "string":  # optional state name
                i += 1
            if tok()[:2] == ("sym", "{"):
                raise UnsupportedFeature(
                    "state-based acceptance is not supported (use transition marks)",
                    filename, line)
            if cur in edges:
                raise HoaSyntaxError(f"state {cur} defined twice", filename, line)
            edges[cur] = []
            state_order.append(cur)
        elif k == "sym" and t == "[":
            if cur is None:
                raise HoaSyntaxError("edge outside a state", filename, line)
            i += 1
            p = _LabelParser(toks, i, aliases, len(ap_names), filename, line)
            g, i = p.parse()
            if tok()[:2] != ("sym", "]"):
                raise HoaSyntaxError("expected ']' after label", filename, line)
            i += 1
            if tok()[0] != "int":
                raise HoaSyntaxError("expected target state", filename, line)
            tgt = int(tok()[1])
            i += 1
            if tok()[:2] == ("sym", "&"):
                raise UnsupportedFeature("alternating automata are not supported", filename, line)
            sets = set()
            if tok()[:2] == ("sym", "{"):
                i += 1
                while tok()[0] == "int":
                    sets.add(int(tok()[1]))
                    i += 1
                if tok()[:2] != ("sym", "}"):
                    raise HoaSyntaxError("expected '}'", filename, line)
                i += 1
            for s in sets:
                if s >= acc_sets_count:
                    raise HoaSyntaxError(f"acceptance set {s} out of range", filename, line)
            if g.is_false():
                raise HoaSyntaxError("unsatisfiable edge guard", filename, line)
            edges[cur].append(Edge(g, tgt, frozenset(sets)))
        elif k == "int":
            raise UnsupportedFeature(
                "implicit edge labels are not supported; write explicit [expr] labels",
                filename, line)
        else:
            raise HoaSyntaxError(f"unexpected token '{t}' in body", filename, line)

    i += 1
    if num_states is None:
        num_states = (max(edges) + 1) if edges else 0
    for s in range(num_states):
        edges.setdefault(s, [])
    if state_order != sorted(state_order) or (state_order and state_order != list(range(len(state_order)))):
        # states may come in any order; reindex by number
        pass
    if start >= num_states:
        raise HoaSyntaxError(f"initial state {start} out of range", filename, 0)
    for s, es in edges.items():
        for e in es:
            if e.target >= num_states:
                raise HoaSyntaxError(f"edge target {e.target} out of range", filename, 0)

    eps = [[] for _ in range(num_states)]
    for src, tgt, prio in eps_decls:
        if src >= num_states or tgt >= num_states:
            raise HoaSyntaxError("X-epsilon endpoint out of range", filename, 0)
        eps[src].append((tgt, prio))

    aut = Automaton(
        ap_names=ap_names,
        initial=start,
        edges=tuple(tuple(edges[s]) for s in range(num_states)),
        eps=tuple(tuple(e) for e in eps) if eps_decls else (),
        acceptance=kind_,
        num_priorities=nprio if kind_ == "parity" else 0,
        name=name,
    )
    if kind_ != "buchi" and is_nondeterministic(aut):
        raise UnsupportedFeature(
            "nondeterministic automata must have Buchi acceptance conditions", filename, 0)
    return aut


def parse_hoa_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_hoa(fh.read(), str(path))


# ---------------------------------------------------------------------------
# parity normalization
# ---------------------------------------------------------------------------

def normalize_to_parity(aut):
    """Assign max-odd parity priorities; the transition structure is unchanged."""
    kind = aut.acceptance

    def prio(sets):
        if kind == "buchi":
            return 1 if 0 in sets else 0
        if kind == "cobuchi":
            return 2 if 0 in sets else 1
        if kind == "rabin1":
            return 2 if 0 in sets else (1 if 1 in sets else 0)
        if kind == "streett1":
            return 3 if 1 in sets else (2 if 0 in sets else 1)
        if kind == "parity":
            return max(sets) if sets else 0
        raise UnsupportedAcceptance(f"cannot normalize acceptance '{kind}'")

    n = {"buchi": 2, "cobuchi": 3, "rabin1": 3, "streett1": 4}.get(kind, aut.num_priorities)
    new_edges = tuple(
        tuple(replace(e, priority=prio(e.acc_sets), acc_sets=frozenset({prio(e.acc_sets)}))
              for e in es)
        for es in aut.edges
    )
    return Automaton(
        ap_names=aut.ap_names,
        initial=aut.initial,
        edges=new_edges,
        eps=aut.eps,
        acceptance="parity",
        num_priorities=n,
        name=aut.name,
        original_acceptance=aut.original_acceptance or kind,
    )


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def emit_hoa(aut):
    n_sets = aut.num_priorities if aut.acceptance == "parity" else {
        "buchi": 1, "cobuchi": 1, "rabin1": 2, "streett1": 2}[aut.acceptance]
    lines = ["HOA: v1"]
    if aut.name:
        lines.append(f'name: "{aut.name}"')
    lines.append(f"States: {aut.num_states}")
    lines.append(f"Start: {aut.initial}")
    quoted = " ".join(f'"{a}"' for a in aut.ap_names)
    lines.append(f"AP: {aut.num_aps}" + (f" {quoted}" if aut.ap_names else ""))
    lines.append(f"acc-name: {acc_name_string(aut.acceptance, n_sets)}")
    lines.append(f"Acceptance: {acceptance_formula(aut.acceptance, n_sets)}")
    for s in range(aut.num_states):
        for t, p in aut.eps_at(s):
            lines.append(f"X-epsilon: {s} {t} {p}")
    lines.append("--BODY--")
    for s in range(aut.num_states):
        lines.append(f"State: {s}")
        for e in aut.edges[s]:
            sets = ""
            if e.acc_sets:
                sets = " {" + " ".join(str(x) for x in sorted(e.acc_sets)) + "}"
            lines.append(f"[{e.guard.to_hoa()}] {e.target}{sets}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"
