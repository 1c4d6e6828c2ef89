"""Register machine: instruction set, assembly text format and interpreters.

Registers hold unbounded naturals and default to 0.  The input goes in R1 and
the result is read from R1 when the machine halts.  A program halts when it
executes HALT or when the program counter leaves ``[0, len(program))``.

Two interpreters share these semantics.  :func:`run_reference` is a plain
one-instruction-at-a-time loop.  :func:`run` translates each basic block into
a Python function once per program and then dispatches block by block, falling
back to the reference stepper when the remaining budget is smaller than the
next block.  Both report identical outcomes for every (program, input, budget).
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass


class Op(enum.IntEnum):
    HALT = 0
    LDI = 1
    MOV = 2
    ADD = 3
    SUB = 4
    MUL = 5
    DIV = 6
    MOD = 7
    LOAD = 8
    STORE = 9
    JZ = 10
    JMP = 11


# operand kinds: r = register index, i = immediate, t = jump target
SIGNATURES: dict[Op, str] = {
    Op.HALT: "",
    Op.LDI: "ri",
    Op.MOV: "rr",
    Op.ADD: "rr",
    Op.SUB: "rr",
    Op.MUL: "rr",
    Op.DIV: "rr",
    Op.MOD: "rr",
    Op.LOAD: "rr",
    Op.STORE: "rr",
    Op.JZ: "rt",
    Op.JMP: "t",
}

JUMPS = (Op.JZ, Op.JMP)


@dataclass(frozen=True)
class Instruction:
    op: Op
    args: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "op", Op(self.op))
        object.__setattr__(self, "args", tuple(self.args))
        sig = SIGNATURES[self.op]
        if len(self.args) != len(sig):
            raise ValueError(f"{self.op.name} takes {len(sig)} operands, got {len(self.args)}")
        for a in self.args:
            if not isinstance(a, int) or isinstance(a, bool) or a < 0:
                raise ValueError(f"operands must be naturals, got {a!r}")

    @property
    def target(self) -> int | None:
        """Jump target, or None for non-jumps."""
        if self.op in JUMPS:
            return self.args[-1]
        return None

    def __str__(self) -> str:
        if not self.args:
            return self.op.name
        return f"{self.op.name} " + ", ".join(str(a) for a in self.args)


def I(op: Op | str, *args: int) -> Instruction:
    """Shorthand constructor: ``I("LDI", 1, 7)``."""
    if isinstance(op, str):
        op = Op[op.upper()]
    return Instruction(op, args)


@dataclass(frozen=True)
class Program:
    instructions: tuple[Instruction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __getitem__(self, k):
        return self.instructions[k]

    def __add__(self, other: "Program") -> "Program":
        return Program(self.instructions + tuple(other))

    @functools.cached_property
    def _hash(self) -> int:
        return hash(self.instructions)

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True)
class MachineState:
    pc: int
    registers: dict
    steps_used: int


@dataclass(frozen=True)
class RunOutcome:
    """Result of a bounded run.  ``value`` is None exactly when the budget ran out."""

    halted: bool
    value: int | None
    steps: int

    def __post_init__(self):
        if self.halted == (self.value is None):
            raise ValueError("Halted carries a value, BudgetExhausted never does")

    @property
    def tag(self) -> str:
        return "Halted" if self.halted else "BudgetExhausted"

    def __str__(self) -> str:
        return f"Halted({self.value})" if self.halted else "BudgetExhausted"


def Halted(value: int, steps: int = 0) -> RunOutcome:
    return RunOutcome(True, value, steps)


def BudgetExhausted(steps: int = 0) -> RunOutcome:
    return RunOutcome(False, None, steps)


# ---------------------------------------------------------------------------
# assembly text

class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


_LABEL = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_.]*)\s*:")
_NAT = re.compile(r"[0-9]+$")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*$")


def parse_program(text: str) -> Program:
    """Parse assembly source; labels are resolved to absolute indices."""
    labels: dict[str, int] = {}
    pending = []  # (lineno, col, op, [(token, col)])
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0]
        pos = 0
        while True:
            m = _LABEL.match(line, pos)
            if not m:
                break
            name = m.group(1)
            if name.upper() in Op.__members__:
                break
            if name in labels:
                raise ParseError(lineno, m.start(1) + 1, f"duplicate label {name!r}")
            labels[name] = len(pending)
            pos = m.end()
        rest = line[pos:]
        if not rest.strip():
            continue
        col = pos + len(rest) - len(rest.lstrip()) + 1
        body = rest.strip()
        mnemonic, _, operand_text = body.partition(" ")
        op = Op.__members__.get(mnemonic.upper())
        if op is None:
            raise ParseError(lineno, col, f"unknown opcode {mnemonic!r}")
        operands = []
        if operand_text.strip():
            ocol = col + len(mnemonic) + 1
            for tok in operand_text.split(","):
                lead = len(tok) - len(tok.lstrip())
                operands.append((tok.strip(), ocol + lead))
                ocol += len(tok) + 1
        sig = SIGNATURES[op]
        if len(operands) != len(sig):
            raise ParseError(lineno, col, f"{op.name} expects {len(sig)} operands, got {len(operands)}")
        pending.append((lineno, op, operands))

    instructions = []
    for lineno, op, operands in pending:
        args = []
        for kind, (tok, ocol) in zip(SIGNATURES[op], operands):
            if _NAT.match(tok):
                args.append(int(tok))
            elif kind == "t" and _IDENT.match(tok):
                if tok not in labels:
                    raise ParseError(lineno, ocol, f"unknown label {tok!r}")
                args.append(labels[tok])
            else:
                raise ParseError(lineno, ocol, f"bad operand {tok!r}")
        instructions.append(Instruction(op, tuple(args)))
    return Program(instructions)


def render_program(p: Program) -> str:
    """Assembly text with absolute numeric jump targets."""
    return "\n".join(str(ins) for ins in p)


# ---------------------------------------------------------------------------
# interpreters

def _fetch(regs: dict, a: int) -> int:
    return regs.get(a, 0)


def step(p: Program, pc: int, regs: dict) -> int | None:
    """Execute one instruction in place; return the next pc, or None on HALT."""
    ins = p.instructions[pc]
    op, args = ins.op, ins.args
    if op is Op.HALT:
        return None
    if op is Op.JMP:
        return args[0]
    a = args[0]
    if op is Op.JZ:
        return args[1] if regs.get(a, 0) == 0 else pc + 1
    if op is Op.LDI:
        regs[a] = args[1]
        return pc + 1
    b = args[1]
    x, y = regs.get(a, 0), regs.get(b, 0)
    if op is Op.MOV:
        regs[a] = y
    elif op is Op.ADD:
        regs[a] = x + y
    elif op is Op.SUB:
        regs[a] = x - y if x > y else 0
    elif op is Op.MUL:
        regs[a] = x * y
    elif op is Op.DIV:
        regs[a] = x // y if y else 0
    elif op is Op.MOD:
        regs[a] = x % y if y else 0
    elif op is Op.LOAD:
        regs[a] = regs.get(y, 0)
    elif op is Op.STORE:
        regs[x] = y
    return pc + 1


def run_reference(p: Program, input: int, budget: int) -> RunOutcome:
    """Straightforward stepper; the semantic baseline for :func:`run`."""
    if budget < 0 or input < 0:
        raise ValueError("budget and input must be naturals")
    regs = {1: input}
    pc, steps, n = 0, 0, len(p)
    while 0 <= pc < n:
        if steps >= budget:
            return BudgetExhausted(steps)
        steps += 1
        nxt = step(p, pc, regs)
        if nxt is None:
            break
        pc = nxt
    return Halted(regs.get(1, 0), steps)


_MAX_FAST_REG = 1024
_DIVERGE = -2
_HALT = -1


class _Compiled:
    """Basic blocks of one program translated to Python closures."""

    def __init__(self, p: Program):
        n = len(p)
        direct = [a for ins in p for k, a in zip(SIGNATURES[ins.op], ins.args) if k == "r"]
        self.nr = max(2, min(max(direct, default=0) + 1, _MAX_FAST_REG))
        self.n = n
        leaders = {0}
        for k, ins in enumerate(p):
            if ins.op in JUMPS or ins.op is Op.HALT:
                leaders.add(k + 1)
            if ins.target is not None and ins.target < n:
                leaders.add(ins.target)
        leaders = sorted(x for x in leaders if x < n)
        self.fns = [None] * (n + 1)
        self.lens = [0] * (n + 1)
        consts: list[int] = []
        src = []
        for bi, start in enumerate(leaders):
            end = leaders[bi + 1] if bi + 1 < len(leaders) else n
            body = self._block(p, start, end, consts)
            src.append(f"def b{start}(r, h):\n" + "\n".join("    " + s for s in body))
            self.lens[start] = end - start
        ns = {"K": tuple(consts)}
        exec(compile("\n".join(src) or "pass", "<block>", "exec"), ns)
        for start in leaders:
            self.fns[start] = ns[f"b{start}"]

    def _get(self, a: int) -> str:
        return f"r[{a}]" if a < self.nr else f"h.get({a}, 0)"

    def _set(self, a: int, expr: str) -> str:
        return f"r[{a}] = {expr}" if a < self.nr else f"h[{a}] = {expr}"

    def _block(self, p: Program, start: int, end: int, consts: list) -> list[str]:
        n, nr, g, s = self.n, self.nr, self._get, self._set
        out = []
        for pc in range(start, end):
            ins = p.instructions[pc]
            op, args = ins.op, ins.args
            if op is Op.HALT:
                out.append(f"return {_HALT}")
                return out
            if op is Op.JMP:
                t = min(args[0], n)
                out.append(f"return {_DIVERGE if t == pc else t}")
                return out
            if op is Op.JZ:
                t = min(args[1], n)
                if t == pc:
                    out.append(f"return {_DIVERGE} if {g(args[0])} == 0 else {pc + 1}")
                else:
                    out.append(f"return {t} if {g(args[0])} == 0 else {pc + 1}")
                return out
            a = args[0]
            if op is Op.LDI:
                c = args[1]
                if c < 1 << 60:
                    out.append(s(a, str(c)))
                else:
                    consts.append(c)
                    out.append(s(a, f"K[{len(consts) - 1}]"))
                continue
            b = args[1]
            if op is Op.MOV:
                out.append(s(a, g(b)))
            elif op is Op.ADD:
                out.append(s(a, f"{g(a)} + {g(b)}"))
            elif op is Op.SUB:
                out.append(f"v = {g(a)} - {g(b)}")
                out.append(s(a, "v if v > 0 else 0"))
            elif op is Op.MUL:
                out.append(s(a, f"{g(a)} * {g(b)}"))
            elif op is Op.DIV:
                out.append(f"d = {g(b)}")
                out.append(s(a, f"{g(a)} // d if d else 0"))
            elif op is Op.MOD:
                out.append(f"d = {g(b)}")
                out.append(s(a, f"{g(a)} % d if d else 0"))
            elif op is Op.LOAD:
                out.append(f"x = {g(b)}")
                out.append(s(a, f"r[x] if x < {nr} else h.get(x, 0)"))
            elif op is Op.STORE:
                out.append(f"x = {g(a)}")
                out.append(f"if x < {nr}: r[x] = {g(b)}")
                out.append(f"else: h[x] = {g(b)}")
        out.append(f"return {end}")
        return out


@functools.lru_cache(maxsize=32)
def _compiled(p: Program) -> _Compiled:
    return _Compiled(p)


def run(p: Program, input: int, budget: int) -> RunOutcome:
    """Run ``p`` on ``input`` for at most ``budget`` instructions.

    Returns ``Halted(R1)`` if HALT executes or the pc leaves the program,
    otherwise ``BudgetExhausted``.
    """
    if budget < 0 or input < 0:
        raise ValueError("budget and input must be naturals")
    c = _compiled(p)
    n, fns, lens, nr = c.n, c.fns, c.lens, c.nr
    r = [0] * nr
    r[1] = input
    h: dict[int, int] = {}
    pc, steps = 0, 0
    while pc < n:
        size = lens[pc]
        if steps + size > budget:
            break
        steps += size
        pc = fns[pc](r, h)
        if pc < 0:
            if pc == _HALT:
                return Halted(r[1], steps)
            # a jump to itself with nothing else in its block repeats forever
            return BudgetExhausted(budget)
    else:
        return Halted(r[1], steps)
    # not enough budget for the whole next block: finish one step at a time
    regs = {k: v for k, v in enumerate(r) if v}
    regs.update((k, v) for k, v in h.items() if v)
    while 0 <= pc < n:
        if steps >= budget:
            return BudgetExhausted(steps)
        steps += 1
        nxt = step(p, pc, regs)
        if nxt is None:
            break
        pc = nxt
    return Halted(regs.get(1, 0), steps)
