"""MAC: a small structured language compiled to register-machine code.

Grammar (one statement per line, ``#`` starts a comment)::

    var a, b, c                    declarations, before first use
    x = <expr>                     assignment
    mem[<expr>] = <expr>           heap write
    pair(d, <expr>, <expr>)        d = pair(a, b)
    unpair(a, b, <expr>)           (a, b) = unpair(z)
    while <cond> [do] ... end
    if <cond> [then] ... [else ...] end
    halt                           stop; R1 <- output
    diverge                        loop forever

    <expr> := + - * / % over naturals, variables, constants, mem[<expr>], ( )
    <cond> := <expr> (== | != | < | <= | > | >=) <expr>

``-`` is monus, ``/`` and ``%`` by zero give 0.  ``input`` is R1 and is
predeclared; ``output`` is declared implicitly if the source does not declare
it.  Falling off the end of the program behaves like ``halt``.

Register map: R0 scratch, R1 input/output, R2..R63 variables in declaration
order, R64..R126 expression temporaries, R127 holds HEAP_BASE when the program
touches memory, R128..R159 locals of the pair/unpair library routines.
``mem[i]`` lives in register HEAP_BASE + i.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .encoding import pair as host_pair, unpair as host_unpair
from .machine import Instruction, Op, Program, SIGNATURES

HEAP_BASE = 1 << 20
SCRATCH = 0
IO_REG = 1
VAR_BAND = range(2, 64)
TEMP_BAND = range(64, 127)
HEAP_REG = 127
LIB_BAND = range(128, 160)


class MacError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


# ---------------------------------------------------------------------------
# syntax tree

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Mem:
    addr: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Cond:
    op: str
    left: object
    right: object


@dataclass
class Assign:
    target: str
    expr: object
    line: int = 0


@dataclass
class MemStore:
    addr: object
    expr: object
    line: int = 0


@dataclass
class PairStmt:
    dest: str
    a: object
    b: object
    line: int = 0


@dataclass
class UnpairStmt:
    first: str
    second: str
    z: object
    line: int = 0


@dataclass
class While:
    cond: Cond
    body: list
    line: int = 0


@dataclass
class If:
    cond: Cond
    then: list
    orelse: list
    line: int = 0


@dataclass
class Halt:
    line: int = 0


@dataclass
class Diverge:
    line: int = 0


@dataclass
class MacProgram:
    declarations: list[str]
    body: list


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(==|!=|<=|>=|[-+*/%()<>=\[\],]))")
_KEYWORDS = {"var", "while", "do", "if", "then", "else", "end", "halt", "diverge", "mem", "pair", "unpair"}


def _tokenize(text: str, line: int) -> list[str]:
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MacError(f"unexpected character {text[pos:].strip()[:1]!r}", line)
        toks.append(m.group(m.lastindex))
        pos = m.end()
    return toks


class _Exprs:
    def __init__(self, toks: list[str], line: int):
        self.toks, self.pos, self.line = toks, 0, line

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise MacError("unexpected end of line" + (f", expected {expected!r}" if expected else ""), self.line)
        if expected is not None and tok != expected:
            raise MacError(f"expected {expected!r}, got {tok!r}", self.line)
        self.pos += 1
        return tok

    def done(self):
        if self.peek() is not None:
            raise MacError(f"trailing input {self.peek()!r}", self.line)

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek() in ("*", "/", "%"):
            op = self.take()
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        tok = self.take()
        if tok.isdigit():
            return Num(int(tok))
        if tok == "(":
            node = self.expr()
            self.take(")")
            return node
        if tok == "mem":
            self.take("[")
            node = self.expr()
            self.take("]")
            return Mem(node)
        if re.match(r"[A-Za-z_]", tok) and tok not in _KEYWORDS:
            return Var(tok)
        raise MacError(f"unexpected {tok!r} in expression", self.line)

    def cond(self) -> Cond:
        paren = self.peek() == "(" and self._balanced_outer()
        if paren:
            self.take("(")
        left = self.expr()
        op = self.peek()
        if op not in ("==", "!=", "<", "<=", ">", ">="):
            got = "end of line" if op is None else repr(op)
            raise MacError(f"expected comparison, got {got}", self.line)
        self.take()
        right = self.expr()
        if paren:
            self.take(")")
        return Cond(op, left, right)

    def _balanced_outer(self) -> bool:
        # "(a < b)" vs "(a + 1) < b": outer parens wrap a comparison only if
        # the matching close paren is the last significant token
        depth = 0
        rest = [t for t in self.toks[self.pos:] if t not in ("do", "then")]
        for k, t in enumerate(rest):
            depth += t == "("
            depth -= t == ")"
            if depth == 0:
                return k == len(rest) - 1
        return False


def parse_mac(src: str) -> MacProgram:
    decls: list[str] = []
    stack: list[tuple[str, object, list]] = [("top", None, [])]
    for lineno, raw in enumerate(src.splitlines(), start=1):
        toks = _tokenize(raw.split("#", 1)[0], lineno)
        if not toks:
            continue
        head = toks[0]
        body = stack[-1][2]
        if head == "var":
            names = [t for t in toks[1:] if t != ","]
            if not names or toks[1:] != _commas(names):
                raise MacError("malformed declaration", lineno)
            for name in names:
                if name in _KEYWORDS or not re.match(r"[A-Za-z_]\w*$", name):
                    raise MacError(f"bad variable name {name!r}", lineno)
                if name in decls or name == "input":
                    raise MacError(f"variable {name!r} declared twice", lineno)
                decls.append(name)
        elif head in ("while", "if"):
            tail = toks[-1] if toks[-1] in ("do", "then") else None
            inner = toks[1:-1] if tail else toks[1:]
            p = _Exprs(inner, lineno)
            cond = p.cond()
            p.done()
            node = While(cond, [], lineno) if head == "while" else If(cond, [], [], lineno)
            body.append(node)
            stack.append((head, node, node.body if head == "while" else node.then))
        elif head == "else":
            if len(toks) != 1 or stack[-1][0] != "if":
                raise MacError("'else' without 'if'", lineno)
            kind, node, _ = stack.pop()
            stack.append(("else", node, node.orelse))
        elif head == "end":
            if len(toks) != 1 or len(stack) == 1:
                raise MacError("unmatched 'end'", lineno)
            stack.pop()
        elif head in ("halt", "diverge"):
            if len(toks) != 1:
                raise MacError(f"'{head}' takes no arguments", lineno)
            body.append(Halt(lineno) if head == "halt" else Diverge(lineno))
        elif head in ("pair", "unpair"):
            p = _Exprs(toks[1:], lineno)
            p.take("(")
            first = p.take()
            p.take(",")
            if head == "pair":
                a = p.expr()
                p.take(",")
                b = p.expr()
                p.take(")")
                p.done()
                body.append(PairStmt(first, a, b, lineno))
            else:
                second = p.take()
                p.take(",")
                z = p.expr()
                p.take(")")
                p.done()
                if first == second:
                    raise MacError("unpair targets must differ", lineno)
                body.append(UnpairStmt(first, second, z, lineno))
        elif head == "mem":
            p = _Exprs(toks, lineno)
            p.take("mem")
            p.take("[")
            addr = p.expr()
            p.take("]")
            p.take("=")
            expr = p.expr()
            p.done()
            body.append(MemStore(addr, expr, lineno))
        elif len(toks) >= 2 and toks[1] == "=":
            p = _Exprs(toks[2:], lineno)
            expr = p.expr()
            p.done()
            body.append(Assign(head, expr, lineno))
        else:
            raise MacError(f"cannot parse statement starting with {head!r}", lineno)
    if len(stack) != 1:
        raise MacError(f"unterminated '{stack[-1][0]}' block")
    if "output" not in decls:
        decls.append("output")
    prog = MacProgram(decls, stack[0][2])
    _check_declared(prog)
    return prog


def _commas(names):
    out = []
    for k, n in enumerate(names):
        if k:
            out.append(",")
        out.append(n)
    return out


def _expr_vars(e):
    if isinstance(e, Var):
        yield e.name
    elif isinstance(e, Mem):
        yield from _expr_vars(e.addr)
    elif isinstance(e, (BinOp, Cond)):
        yield from _expr_vars(e.left)
        yield from _expr_vars(e.right)


def _check_declared(prog: MacProgram):
    known = set(prog.declarations) | {"input"}

    def need(name, line):
        if name not in known:
            raise MacError(f"undeclared variable {name!r}", line)

    def walk(stmts):
        for s in stmts:
            exprs, targets = [], []
            if isinstance(s, Assign):
                exprs, targets = [s.expr], [s.target]
            elif isinstance(s, MemStore):
                exprs = [s.addr, s.expr]
            elif isinstance(s, PairStmt):
                exprs, targets = [s.a, s.b], [s.dest]
            elif isinstance(s, UnpairStmt):
                exprs, targets = [s.z], [s.first, s.second]
            elif isinstance(s, (While, If)):
                exprs = [s.cond]
            for t in targets:
                need(t, s.line)
            for e in exprs:
                for v in _expr_vars(e):
                    need(v, s.line)
            if isinstance(s, While):
                walk(s.body)
            elif isinstance(s, If):
                walk(s.then)
                walk(s.orelse)

    walk(prog.body)


# ---------------------------------------------------------------------------
# library routines, expanded inline at each use

_PAIR_SRC = """
__s = __a + __b
output = __s * (__s + 1) / 2 + __b
"""

# Newton's method from 256^ceil(bytes/2) >= sqrt(z); a triangular-number
# search would need sqrt(z) iterations, hopeless for program-sized indices.
_UNPAIR_SRC = """
__n = 8 * __z + 1
__c = 0
__q = __n
while __q != 0
  __q = __q / 256
  __c = __c + 1
end
__c = (__c + 1) / 2
__x = 1
while __c != 0
  __x = __x * 256
  __c = __c - 1
end
__y = (__x + __n / __x) / 2
while __y < __x
  __x = __y
  __y = (__x + __n / __x) / 2
end
__w = (__x - 1) / 2
__b = __z - __w * (__w + 1) / 2
__a = __w - __b
"""

_LIB_VARS = ["__a", "__b", "__s", "__z", "__n", "__c", "__q", "__x", "__y", "__w"]


def _lib_body(src: str) -> list:
    decl = "var " + ", ".join(_LIB_VARS) + "\n"
    return parse_mac(decl + src).body


# ---------------------------------------------------------------------------
# code generation

@dataclass(frozen=True)
class CodeUnit:
    """Compiled code with jump targets relative to the unit's first instruction."""

    instructions: Program
    register_footprint: int

    def __len__(self) -> int:
        return len(self.instructions)


class _Label:
    __slots__ = ("pos",)

    def __init__(self):
        self.pos = None


@dataclass
class _Gen:
    regs: dict
    code: list = field(default_factory=list)
    temps_in_use: int = 0
    uses_heap: bool = False

    def emit(self, op: Op, *args):
        self.code.append((op, list(args)))

    def mark(self, label: _Label):
        label.pos = len(self.code)

    def temp(self) -> int:
        if self.temps_in_use >= len(TEMP_BAND):
            raise MacError("expression too deep: temporary register band exhausted")
        r = TEMP_BAND[self.temps_in_use]
        self.temps_in_use += 1
        return r

    def release(self, n: int = 1):
        self.temps_in_use -= n

    # expressions ---------------------------------------------------------

    def expr(self, e, dest: int):
        if isinstance(e, Num):
            self.emit(Op.LDI, dest, e.value)
        elif isinstance(e, Var):
            src = self.regs[e.name]
            if src != dest:
                self.emit(Op.MOV, dest, src)
        elif isinstance(e, Mem):
            self.uses_heap = True
            self.expr(e.addr, dest)
            self.emit(Op.ADD, dest, HEAP_REG)
            self.emit(Op.LOAD, dest, dest)
        else:
            self.expr(e.left, dest)
            op = {"+": Op.ADD, "-": Op.SUB, "*": Op.MUL, "/": Op.DIV, "%": Op.MOD}[e.op]
            r = e.right
            if isinstance(r, Var):
                self.emit(op, dest, self.regs[r.name])
            elif isinstance(r, Num):
                self.emit(Op.LDI, SCRATCH, r.value)
                self.emit(op, dest, SCRATCH)
            else:
                t = self.temp()
                self.expr(r, t)
                self.emit(op, dest, t)
                self.release()

    def assign(self, reg: int, e):
        if reg in self._unsafe_regs(e):
            t = self.temp()
            self.expr(e, t)
            self.emit(Op.MOV, reg, t)
            self.release()
        else:
            self.expr(e, reg)

    def _unsafe_regs(self, e) -> set[int]:
        # registers read after the destination has been overwritten
        if isinstance(e, BinOp):
            return self._unsafe_regs(e.left) | {self.regs[v] for v in _expr_vars(e.right)}
        if isinstance(e, Mem):
            return self._unsafe_regs(e.addr)
        return set()

    def cond(self, c: Cond) -> tuple[int, bool, int]:
        """Evaluate into a register; returns (reg, zero_means_true, temps)."""
        op = c.op
        if op in ("==", "!=") and c.right == Num(0) and isinstance(c.left, Var):
            return self.regs[c.left.name], op == "==", 0
        if op in (">", "<="):
            c = Cond({">": "<", "<=": ">="}[op], c.right, c.left)
            op = c.op
        t = self.temp()
        if op == "<":  # b - a nonzero
            self.expr(c.right, t)
            self._sub(t, c.left)
            return t, False, 1
        if op == ">=":  # b - a zero
            self.expr(c.right, t)
            self._sub(t, c.left)
            return t, True, 1
        if c.right == Num(0):
            self.expr(c.left, t)
            return t, op == "==", 1
        u = self.temp()
        self.expr(c.left, t)
        self.expr(c.right, u)
        self.emit(Op.MOV, SCRATCH, t)
        self.emit(Op.SUB, t, u)
        self.emit(Op.SUB, u, SCRATCH)
        self.emit(Op.ADD, t, u)
        return t, op == "==", 2

    def _sub(self, dest: int, e):
        if isinstance(e, Var):
            self.emit(Op.SUB, dest, self.regs[e.name])
        elif isinstance(e, Num):
            self.emit(Op.LDI, SCRATCH, e.value)
            self.emit(Op.SUB, dest, SCRATCH)
        else:
            t = self.temp()
            self.expr(e, t)
            self.emit(Op.SUB, dest, t)
            self.release()

    def branch_if_false(self, c: Cond, target: _Label):
        reg, zero_true, n = self.cond(c)
        if zero_true:
            skip = _Label()
            self.emit(Op.JZ, reg, skip)
            self.emit(Op.JMP, target)
            self.mark(skip)
        else:
            self.emit(Op.JZ, reg, target)
        self.release(n)

    # statements ------------------------------------------------------------

    def stmts(self, body: list):
        for s in body:
            self.stmt(s)

    def stmt(self, s):
        if isinstance(s, Assign):
            self.assign(self.regs[s.target], s.expr)
        elif isinstance(s, MemStore):
            self.uses_heap = True
            a = self.temp()
            v = self.temp()
            self.expr(s.addr, a)
            self.emit(Op.ADD, a, HEAP_REG)
            self.expr(s.expr, v)
            self.emit(Op.STORE, a, v)
            self.release(2)
        elif isinstance(s, PairStmt):
            self.lib(_PAIR_SRC, {"__a": s.a, "__b": s.b}, {"output": s.dest})
        elif isinstance(s, UnpairStmt):
            self.lib(_UNPAIR_SRC, {"__z": s.z}, {"__a": s.first, "__b": s.second})
        elif isinstance(s, While):
            top, end = _Label(), _Label()
            self.mark(top)
            self.branch_if_false(s.cond, end)
            self.stmts(s.body)
            self.emit(Op.JMP, top)
            self.mark(end)
        elif isinstance(s, If):
            orelse, end = _Label(), _Label()
            self.branch_if_false(s.cond, orelse)
            self.stmts(s.then)
            if s.orelse:
                self.emit(Op.JMP, end)
                self.mark(orelse)
                self.stmts(s.orelse)
                self.mark(end)
            else:
                self.mark(orelse)
        elif isinstance(s, Halt):
            self.halt()
        elif isinstance(s, Diverge):
            here = _Label()
            self.mark(here)
            self.emit(Op.JMP, here)
        else:  # pragma: no cover
            raise TypeError(s)

    def halt(self):
        out = self.regs["output"]
        if out != IO_REG:
            self.emit(Op.MOV, IO_REG, out)
        self.emit(Op.HALT)

    def lib(self, src: str, inputs: dict, outputs: dict):
        lib_regs = {name: LIB_BAND[k] for k, name in enumerate(_LIB_VARS)}
        for name, e in inputs.items():
            self.expr(e, lib_regs[name])
        saved = self.regs
        self.regs = {**lib_regs, "output": lib_regs["__a"]}
        try:
            self.stmts(_lib_body(src))
        finally:
            self.regs = saved
        src_of = {"output": lib_regs["__a"], **lib_regs}
        for name, var in outputs.items():
            self.emit(Op.MOV, self.regs[var], src_of[name])


def compile_mac(src: MacProgram | str) -> CodeUnit:
    """Compile MAC source (text or parsed) into a relocatable CodeUnit."""
    prog = parse_mac(src) if isinstance(src, str) else src
    if len(prog.declarations) > len(VAR_BAND):
        raise MacError(f"{len(prog.declarations)} variables exceed the {len(VAR_BAND)} register band")
    regs = {"input": IO_REG}
    regs.update((name, VAR_BAND[k]) for k, name in enumerate(prog.declarations))
    gen = _Gen(regs)
    gen.stmts(prog.body)
    gen.halt()
    code = gen.code
    shift = 0
    if gen.uses_heap:
        code = [(Op.LDI, [HEAP_REG, HEAP_BASE])] + code
        shift = 1
    instructions = []
    for op, args in code:
        if args and isinstance(args[-1], _Label):
            args = args[:-1] + [args[-1].pos + shift]
        instructions.append(Instruction(op, tuple(args)))
    footprint = max(
        (a for ins in instructions for k, a in zip(SIGNATURES[ins.op], ins.args) if k == "r"),
        default=IO_REG,
    )
    return CodeUnit(Program(instructions), footprint)


def relocate(u: CodeUnit | Program, offset: int) -> Program:
    """Shift every jump target by ``offset``; instruction count unchanged."""
    p = u.instructions if isinstance(u, CodeUnit) else u
    if offset == 0:
        return p
    out = []
    for ins in p:
        if ins.target is not None:
            ins = Instruction(ins.op, ins.args[:-1] + (ins.target + offset,))
        out.append(ins)
    return Program(out)


# ---------------------------------------------------------------------------
# reference semantics

class MacBudgetExceeded(RuntimeError):
    pass


def evaluate(src: MacProgram | str, input: int, max_iterations: int = 10**6) -> int | None:
    """Evaluate MAC source directly on the host.

    Returns the final ``output``, or None if the program executes ``diverge``.
    Raises MacBudgetExceeded when loops run longer than ``max_iterations``.
    """
    prog = parse_mac(src) if isinstance(src, str) else src
    env = {name: 0 for name in prog.declarations}
    env["input"] = input
    mem: dict[int, int] = {}
    budget = [max_iterations]

    def ev(e) -> int:
        if isinstance(e, Num):
            return e.value
        if isinstance(e, Var):
            return env[e.name]
        if isinstance(e, Mem):
            return mem.get(ev(e.addr), 0)
        a, b = ev(e.left), ev(e.right)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return max(0, a - b)
        if e.op == "*":
            return a * b
        if e.op == "/":
            return a // b if b else 0
        return a % b if b else 0

    def test(c: Cond) -> bool:
        a, b = ev(c.left), ev(c.right)
        return {"==": a == b, "!=": a != b, "<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[c.op]

    class _Stop(Exception):
        pass

    class _Hang(Exception):
        pass

    def exec_(body):
        for s in body:
            if isinstance(s, Assign):
                env[s.target] = ev(s.expr)
            elif isinstance(s, MemStore):
                addr = ev(s.addr)
                mem[addr] = ev(s.expr)
            elif isinstance(s, PairStmt):
                env[s.dest] = host_pair(ev(s.a), ev(s.b))
            elif isinstance(s, UnpairStmt):
                env[s.first], env[s.second] = host_unpair(ev(s.z))
            elif isinstance(s, While):
                while test(s.cond):
                    budget[0] -= 1
                    if budget[0] < 0:
                        raise MacBudgetExceeded(max_iterations)
                    exec_(s.body)
            elif isinstance(s, If):
                exec_(s.then if test(s.cond) else s.orelse)
            elif isinstance(s, Halt):
                raise _Stop
            elif isinstance(s, Diverge):
                raise _Hang

    try:
        exec_(prog.body)
    except _Stop:
        pass
    except _Hang:
        return None
    return env["output"]


def mac_asset(name: str, **subs) -> str:
    """Text of a bundled MAC source with ``$NAME`` placeholders filled in."""
    from importlib import resources
    from string import Template

    text = resources.files(__package__).joinpath("mac", name).read_text()
    return Template(text).substitute({k: str(v) for k, v in subs.items()})


def compose(*parts: str) -> str:
    """Concatenate MAC fragments, hoisting every ``var`` line to the top."""
    decls, body = [], []
    for part in parts:
        for line in part.splitlines():
            (decls if line.lstrip().startswith("var ") else body).append(line.strip() if line.lstrip().startswith("var ") else line)
    return "\n".join(decls + body) + "\n"
