"""Parser and elaborator for the PRISM-language subset used by the tool.

Supported grammar (see docs/prism-subset.md for the EBNF):

* header: ``mdp`` or ``smg``
* ``const (int|double|bool) ID = expr;``
* one or more modules with integer variables ``id : [lo..hi] init e;`` and
  commands ``[act] guard -> p1:(upds) + ... ;`` where ``upds`` is a
  conjunction of ``(id'=expr)`` terms (or ``true`` for no change)
* ``label "id" = boolexpr;``
* ``player ID [act], ... endplayer`` (smg only)
* ``rewards "id" [act] guard : expr; endrewards``

Multiple modules compose by full synchronization on shared action labels;
unlabeled commands interleave.  Everything else is rejected with a
positioned message.
"""

from dataclasses import dataclass, field

from .errors import (
    BadModelKind,
    DivisionByZero,
    PrismSyntaxError,
    PrismTypeError,
    UnknownIdentifier,
)

# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------

INT, DOUBLE, BOOL = "int", "double", "bool"


@dataclass(frozen=True)
class IntLit:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class RealLit:
    value: float

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class BoolLit:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Ident:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Unary:
    op: str  # '-' or '!'
    arg: object

    def __str__(self):
        return f"{self.op}{_paren(self.arg)}"


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object

    def __str__(self):
        return f"{_paren(self.left)}{self.op}{_paren(self.right)}"


def _paren(e):
    if isinstance(e, (IntLit, RealLit, BoolLit, Ident)):
        return str(e)
    return f"({e})"


def eval_expr(expr, valuation=None, constants=None):
    """Evaluate a type-checked expression to an int, float or bool."""
    valuation = valuation or {}
    constants = constants or {}
    if isinstance(expr, (IntLit, RealLit, BoolLit)):
        return expr.value
    if isinstance(expr, Ident):
        if expr.name in valuation:
            return valuation[expr.name]
        if expr.name in constants:
            return constants[expr.name]
        raise UnknownIdentifier(f"unknown identifier '{expr.name}'")
    if isinstance(expr, Unary):
        v = eval_expr(expr.arg, valuation, constants)
        return (not v) if expr.op == "!" else -v
    if isinstance(expr, Binary):
        op = expr.op
        # short-circuit keeps guard evaluation cheap
        if op == "&":
            return bool(
                eval_expr(expr.left, valuation, constants)
                and eval_expr(expr.right, valuation, constants)
            )
        if op == "|":
            return bool(
                eval_expr(expr.left, valuation, constants)
                or eval_expr(expr.right, valuation, constants)
            )
        a = eval_expr(expr.left, valuation, constants)
        b = eval_expr(expr.right, valuation, constants)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0:
                raise DivisionByZero(f"division by zero in '{expr}'")
            return a / b
        if op == "=":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
    raise TypeError(f"cannot evaluate {expr!r}")


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

KEYWORDS = {
    "mdp", "smg", "dtmc", "ctmc", "pta",
    "const", "int", "double", "bool", "module", "endmodule", "init",
    "label", "player", "endplayer", "rewards", "endrewards", "true", "false",
}

_SYMBOLS = [
    "..", "->", "!=", "<=", ">=",
    "[", "]", "(", ")", ";", ":", ",", "'", "=", "<", ">",
    "+", "-", "*", "/", "&", "|", "!",
]


@dataclass
class Token:
    kind: str  # 'id', 'int', 'real', 'string', 'sym', 'kw', 'eof'
    text: str
    line: int
    col: int


def _tokenize(text, filename):
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        if c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise PrismSyntaxError("unterminated string", filename, line, col)
            toks.append(Token("string", text[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot and not text.startswith("..", j))):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            lit = text[i:j]
            toks.append(Token("real" if "." in lit else "int", lit, line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            toks.append(Token("kw" if word in KEYWORDS else "id", word, line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("sym", sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise PrismSyntaxError(f"unexpected character {c!r}", filename, line, col)
    toks.append(Token("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# program AST
# ---------------------------------------------------------------------------

@dataclass
class Constant:
    ctype: str
    name: str
    expr: object
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass
class VarDecl:
    name: str
    low: object
    high: object
    init: object
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass
class Branch:
    prob: object  # expression; BoolLit(True) sentinel never used, prob may be None for a single certain branch
    updates: list  # list of (var name, expression); empty list means no change
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass
class Command:
    action: str  # '' for unlabeled
    guard: object
    branches: list
    module: str = ""
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass
class Module:
    name: str
    variables: list
    commands: list
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass
class LabelDef:
    name: str
    expr: object
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass
class PlayerBlock:
    name: str
    actions: list
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass
class RewardItem:
    action: str
    guard: object
    expr: object
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass
class RewardBlock:
    name: str
    items: list
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass
class PrismProgram:
    """A parsed, type-checked PRISM program with evaluated constants."""

    model_kind: str
    constants: list
    modules: list
    labels: list
    players: list
    rewards: list
    filename: str = field(default="<input>", compare=False)
    # filled in by elaboration
    const_values: dict = field(default_factory=dict, compare=False)
    var_info: dict = field(default_factory=dict, compare=False)  # name -> (low, high, init, module)
    var_order: list = field(default_factory=list, compare=False)
    action_player: dict = field(default_factory=dict, compare=False)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, toks, filename):
        self.toks = toks
        self.i = 0
        self.filename = filename

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, expected):
        t = self.tok
        got = t.text if t.kind != "eof" else "end of input"
        raise PrismSyntaxError(f"expected {expected}, found '{got}'", self.filename, t.line, t.col)

    def accept(self, kind, text=None):
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind, text=None):
        t = self.accept(kind, text)
        if t is None:
            self.error(text if text is not None else kind)
        return t

    # expressions; precedence low to high: | & (=,!=) (<,<=,>,>=) (+,-) (*,/) unary
    def parse_expr(self):
        return self._or()

    def _or(self):
        e = self._and()
        while self.accept("sym", "|"):
            e = Binary("|", e, self._and())
        return e

    def _and(self):
        e = self._eq()
        while self.accept("sym", "&"):
            e = Binary("&", e, self._eq())
        return e

    def _eq(self):
        e = self._rel()
        while True:
            if self.accept("sym", "="):
                e = Binary("=", e, self._rel())
            elif self.accept("sym", "!="):
                e = Binary("!=", e, self._rel())
            else:
                return e

    def _rel(self):
        e = self._add()
        while True:
            for op in ("<=", ">=", "<", ">"):
                if self.accept("sym", op):
                    e = Binary(op, e, self._add())
                    break
            else:
                return e

    def _add(self):
        e = self._mul()
        while True:
            if self.accept("sym", "+"):
                e = Binary("+", e, self._mul())
            elif self.accept("sym", "-"):
                e = Binary("-", e, self._mul())
            else:
                return e

    def _mul(self):
        e = self._unary()
        while True:
            if self.accept("sym", "*"):
                e = Binary("*", e, self._unary())
            elif self.accept("sym", "/"):
                e = Binary("/", e, self._unary())
            else:
                return e

    def _unary(self):
        if self.accept("sym", "!"):
            return Unary("!", self._unary())
        if self.accept("sym", "-"):
            return Unary("-", self._unary())
        return self._primary()

    def _primary(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return IntLit(int(t.text))
        if t.kind == "real":
            self.i += 1
            return RealLit(float(t.text))
        if t.kind == "kw" and t.text in ("true", "false"):
            self.i += 1
            return BoolLit(t.text == "true")
        if t.kind == "id":
            self.i += 1
            return Ident(t.text)
        if self.accept("sym", "("):
            e = self.parse_expr()
            self.expect("sym", ")")
            return e
        self.error("expression")

    # program structure -----------------------------------------------------

    def parse_program(self):
        t = self.tok
        if t.kind == "kw" and t.text in ("mdp", "smg"):
            kind = t.text
            self.i += 1
        elif t.kind == "kw" and t.text in ("dtmc", "ctmc", "pta"):
            raise BadModelKind(
                f"model type '{t.text}' is not supported; the allowed model types are mdp and smg",
                self.filename, t.line, t.col)
        else:
            self.error("model type (mdp or smg)")

        constants, modules, labels, players, rewards = [], [], [], [], []
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "kw" and t.text == "const":
                constants.append(self._const())
            elif t.kind == "kw" and t.text == "module":
                modules.append(self._module())
            elif t.kind == "kw" and t.text == "label":
                labels.append(self._label())
            elif t.kind == "kw" and t.text == "player":
                players.append(self._player())
            elif t.kind == "kw" and t.text == "rewards":
                rewards.append(self._rewards())
            else:
                self.error("const, module, label, player or rewards")
        if not modules:
            raise PrismSyntaxError("program has no module", self.filename, 1, 1)
        return PrismProgram(kind, constants, modules, labels, players, rewards, self.filename)

    def _const(self):
        t = self.expect("kw", "const")
        ty = self.tok
        if ty.kind == "kw" and ty.text in (INT, DOUBLE, BOOL):
            self.i += 1
            ctype = ty.text
        else:
            self.error("const type (int, double or bool)")
        name = self.expect("id").text
        self.expect("sym", "=")
        expr = self.parse_expr()
        self.expect("sym", ";")
        return Constant(ctype, name, expr, (t.line, t.col))

    def _module(self):
        t = self.expect("kw", "module")
        name = self.expect("id").text
        variables, commands = [], []
        while True:
            tk = self.tok
            if tk.kind == "kw" and tk.text == "endmodule":
                self.i += 1
                break
            if tk.kind == "id":
                variables.append(self._vardecl())
            elif tk.kind == "sym" and tk.text == "[":
                commands.append(self._command(name))
            else:
                self.error("variable declaration, command or endmodule")
        return Module(name, variables, commands, (t.line, t.col))

    def _vardecl(self):
        t = self.expect("id")
        self.expect("sym", ":")
        self.expect("sym", "[")
        low = self.parse_expr()
        self.expect("sym", "..")
        high = self.parse_expr()
        self.expect("sym", "]")
        self.expect("kw", "init")
        init = self.parse_expr()
        self.expect("sym", ";")
        return VarDecl(t.text, low, high, init, (t.line, t.col))

    def _command(self, module_name):
        t = self.expect("sym", "[")
        act = ""
        a = self.accept("id")
        if a is not None:
            act = a.text
        self.expect("sym", "]")
        guard = self.parse_expr()
        self.expect("sym", "->")
        branches = [self._branch()]
        while self.accept("sym", "+"):
            branches.append(self._branch())
        self.expect("sym", ";")
        return Command(act, guard, branches, module_name, (t.line, t.col))

    def _branch(self):
        pos = (self.tok.line, self.tok.col)
        # either "prob : updates" or bare updates with probability one
        save = self.i
        prob = None
        try:
            e = self.parse_expr()
            if self.accept("sym", ":"):
                prob = e
            else:
                self.i = save
        except PrismSyntaxError:
            self.i = save
        updates = self._updates()
        return Branch(prob, updates, pos)

    def _updates(self):
        if self.accept("kw", "true"):
            return []
        updates = [self._assignment()]
        while self.accept("sym", "&"):
            updates.append(self._assignment())
        return updates

    def _assignment(self):
        self.expect("sym", "(")
        name = self.expect("id").text
        self.expect("sym", "'")
        self.expect("sym", "=")
        expr = self.parse_expr()
        self.expect("sym", ")")
        return (name, expr)

    def _label(self):
        t = self.expect("kw", "label")
        name = self.expect("string").text
        self.expect("sym", "=")
        expr = self.parse_expr()
        self.expect("sym", ";")
        return LabelDef(name, expr, (t.line, t.col))

    def _player(self):
        t = self.expect("kw", "player")
        name = self.expect("id").text
        actions = []
        while True:
            self.expect("sym", "[")
            actions.append(self.expect("id").text)
            self.expect("sym", "]")
            if not self.accept("sym", ","):
                break
        self.expect("kw", "endplayer")
        return PlayerBlock(name, actions, (t.line, t.col))

    def _rewards(self):
        t = self.expect("kw", "rewards")
        name = self.expect("string").text
        items = []
        while not self.accept("kw", "endrewards"):
            p = self.expect("sym", "[")
            act = self.accept("id")
            if act is None:
                raise PrismSyntaxError(
                    "reward items must name an action (state rewards are not supported)",
                    self.filename, p.line, p.col)
            self.expect("sym", "]")
            guard = self.parse_expr()
            self.expect("sym", ":")
            expr = self.parse_expr()
            self.expect("sym", ";")
            items.append(RewardItem(act.text, guard, expr, (p.line, p.col)))
        return RewardBlock(name, items, (t.line, t.col))


# ---------------------------------------------------------------------------
# type checking and elaboration
# ---------------------------------------------------------------------------

def _type_of(expr, var_types, const_types, filename):
    def err(msg, e):
        raise PrismTypeError(f"{msg} in '{e}'", filename)

    def rec(e):
        if isinstance(e, IntLit):
            return INT
        if isinstance(e, RealLit):
            return DOUBLE
        if isinstance(e, BoolLit):
            return BOOL
        if isinstance(e, Ident):
            if e.name in var_types:
                return var_types[e.name]
            if e.name in const_types:
                return const_types[e.name]
            raise UnknownIdentifier(f"unknown identifier '{e.name}'", filename)
        if isinstance(e, Unary):
            t = rec(e.arg)
            if e.op == "!":
                if t != BOOL:
                    err("'!' needs a boolean", e)
                return BOOL
            if t == BOOL:
                err("'-' needs a number", e)
            return t
        if isinstance(e, Binary):
            lt, rt = rec(e.left), rec(e.right)
            op = e.op
            if op in ("&", "|"):
                if lt != BOOL or rt != BOOL:
                    err(f"'{op}' needs booleans", e)
                return BOOL
            if op in ("=", "!="):
                if (lt == BOOL) != (rt == BOOL):
                    err(f"'{op}' compares mixed types", e)
                return BOOL
            if op in ("<", "<=", ">", ">="):
                if lt == BOOL or rt == BOOL:
                    err(f"'{op}' needs numbers", e)
                return BOOL
            if lt == BOOL or rt == BOOL:
                err(f"'{op}' needs numbers", e)
            if op == "/":
                return DOUBLE
            return DOUBLE if DOUBLE in (lt, rt) else INT
        raise PrismTypeError(f"cannot type {e!r}", filename)

    return rec(expr)


def elaborate(program):
    """Evaluate constants, resolve identifiers and type-check all expressions."""
    fn = program.filename
    const_types = {}
    const_values = {}
    for c in program.constants:
        if c.name in const_types:
            raise PrismTypeError(f"constant '{c.name}' redefined", fn, *c.pos)
        t = _type_of(c.expr, {}, const_types, fn)
        if c.ctype == INT and t != INT:
            raise PrismTypeError(f"constant '{c.name}' declared int but defined as {t}", fn, *c.pos)
        if c.ctype == BOOL and t != BOOL:
            raise PrismTypeError(f"constant '{c.name}' declared bool but defined as {t}", fn, *c.pos)
        if c.ctype == DOUBLE and t == BOOL:
            raise PrismTypeError(f"constant '{c.name}' declared double but defined as bool", fn, *c.pos)
        v = eval_expr(c.expr, {}, const_values)
        if c.ctype == DOUBLE:
            v = float(v)
        const_types[c.name] = c.ctype
        const_values[c.name] = v

    var_types, var_info, var_order = {}, {}, []
    for m in program.modules:
        for v in m.variables:
            if v.name in var_types or v.name in const_types:
                raise PrismTypeError(f"'{v.name}' redeclared", fn, *v.pos)
            for bound in (v.low, v.high, v.init):
                if _type_of(bound, {}, const_types, fn) != INT:
                    raise PrismTypeError(f"bounds of '{v.name}' must be integers", fn, *v.pos)
            low = eval_expr(v.low, {}, const_values)
            high = eval_expr(v.high, {}, const_values)
            init = eval_expr(v.init, {}, const_values)
            if low > high:
                raise PrismTypeError(f"empty range [{low}..{high}] for '{v.name}'", fn, *v.pos)
            if not (low <= init <= high):
                raise PrismTypeError(f"initial value {init} of '{v.name}' out of range", fn, *v.pos)
            var_types[v.name] = INT
            var_info[v.name] = (low, high, init, m.name)
            var_order.append(v.name)

    own_vars = {m.name: {v.name for v in m.variables} for m in program.modules}
    for m in program.modules:
        for cmd in m.commands:
            if _type_of(cmd.guard, var_types, const_types, fn) != BOOL:
                raise PrismTypeError("guard is not boolean", fn, *cmd.pos)
            for br in cmd.branches:
                if br.prob is not None:
                    t = _type_of(br.prob, var_types, const_types, fn)
                    if t == BOOL:
                        raise PrismTypeError("probability is not numeric", fn, *br.pos)
                for name, e in br.updates:
                    if name not in var_types:
                        raise UnknownIdentifier(f"unknown variable '{name}'", fn, *br.pos)
                    if name not in own_vars[m.name]:
                        raise PrismTypeError(
                            f"module '{m.name}' updates foreign variable '{name}'", fn, *br.pos)
                    if _type_of(e, var_types, const_types, fn) != INT:
                        raise PrismTypeError(f"update of '{name}' is not an integer", fn, *br.pos)

    for l in program.labels:
        if _type_of(l.expr, var_types, const_types, fn) != BOOL:
            raise PrismTypeError(f"label \"{l.name}\" is not boolean", fn, *l.pos)

    for rb in program.rewards:
        for item in rb.items:
            if _type_of(item.guard, var_types, const_types, fn) != BOOL:
                raise PrismTypeError("reward guard is not boolean", fn, *item.pos)
            if _type_of(item.expr, var_types, const_types, fn) == BOOL:
                raise PrismTypeError("reward value is not numeric", fn, *item.pos)

    action_player = {}
    if program.model_kind == "smg":
        for p in program.players:
            for a in p.actions:
                if a in action_player:
                    raise PrismTypeError(
                        f"action '{a}' assigned to both '{action_player[a]}' and '{p.name}'",
                        fn, *p.pos)
                action_player[a] = p.name

    program.const_values = const_values
    program.var_info = var_info
    program.var_order = var_order
    program.action_player = action_player
    return program


def parse_prism(text, filename="<input>"):
    """Parse and elaborate PRISM source text."""
    toks = _tokenize(text, filename)
    program = _Parser(toks, filename).parse_program()
    return elaborate(program)


def parse_prism_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_prism(fh.read(), str(path))


# ---------------------------------------------------------------------------
# pretty printer (round-trips through parse_prism)
# ---------------------------------------------------------------------------

def emit_prism(program):
    out = [program.model_kind, ""]
    for c in program.constants:
        out.append(f"const {c.ctype} {c.name} = {c.expr};")
    if program.constants:
        out.append("")
    for m in program.modules:
        out.append(f"module {m.name}")
        for v in m.variables:
            out.append(f"  {v.name} : [{v.low}..{v.high}] init {v.init};")
        for cmd in m.commands:
            branches = " + ".join(_emit_branch(b) for b in cmd.branches)
            out.append(f"  [{cmd.action}] {cmd.guard} -> {branches};")
        out.append("endmodule")
        out.append("")
    for l in program.labels:
        out.append(f'label "{l.name}" = {l.expr};')
    for p in program.players:
        acts = ", ".join(f"[{a}]" for a in p.actions)
        out.append(f"player {p.name} {acts} endplayer")
    for rb in program.rewards:
        out.append(f'rewards "{rb.name}"')
        for item in rb.items:
            out.append(f"  [{item.action}] {item.guard} : {item.expr};")
        out.append("endrewards")
    return "\n".join(out) + "\n"


def _emit_branch(b):
    upds = "true" if not b.updates else " & ".join(f"({n}'={e})" for n, e in b.updates)
    if b.prob is None:
        return upds
    return f"{b.prob}:{upds}"
