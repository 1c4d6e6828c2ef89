"""Finite diagonalization: u(a) = delta(g(a, a)) escapes every row of g.

An :class:`OutcomeTable` holds g(a1, a2) = [f(a2)](a1) for a1, a2 in
S = {0..s-1} and values in P = {0..p-1}; row a2 is the function f(a2).  With
a fixed-point-free delta on P the diagonal function u differs from row a at
position a, so no row expresses u.  Everything here is small enough to check
exhaustively.

The measurement reading uses the same machinery: S becomes the set of
measurements M, P the outcomes O, and delta the disturbance.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field


class DiagonalError(ValueError):
    pass


class DegenerateError(DiagonalError):
    """P has a single element, so no fixed-point-free delta exists."""


@dataclass(frozen=True)
class FiniteFunction:
    domain_size: int
    codomain_size: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if self.domain_size < 1 or self.codomain_size < 1:
            raise DiagonalError("domain and codomain must be non-empty")
        if len(self.table) != self.domain_size:
            raise DiagonalError(f"table has {len(self.table)} entries, expected {self.domain_size}")
        if any(not 0 <= v < self.codomain_size for v in self.table):
            raise DiagonalError("table value out of codomain range")

    def __call__(self, a: int) -> int:
        return self.table[a]

    @classmethod
    def endo(cls, table) -> "FiniteFunction":
        table = tuple(table)
        return cls(len(table), len(table), table)


def negation() -> FiniteFunction:
    return FiniteFunction.endo((1, 0))


def cyclic_shift(p: int) -> FiniteFunction:
    return FiniteFunction.endo((v + 1) % p for v in range(p))


def identity(p: int) -> FiniteFunction:
    return FiniteFunction.endo(range(p))


@dataclass(frozen=True)
class OutcomeTable:
    """``rows[a2][a1] = g(a1, a2)``; row a2 is the expressible function f(a2)."""

    s: int
    p: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        if self.s < 1 or self.p < 1:
            raise DiagonalError("s and p must be at least 1")
        if len(self.rows) != self.s or any(len(r) != self.s for r in self.rows):
            raise DiagonalError(f"outcome table must be {self.s}x{self.s}")
        if any(not 0 <= v < self.p for r in self.rows for v in r):
            raise DiagonalError("outcome out of range")

    def g(self, a1: int, a2: int) -> int:
        return self.rows[a2][a1]

    def row(self, a2: int) -> tuple[int, ...]:
        return self.rows[a2]

    @classmethod
    def constant(cls, s: int, p: int, value: int) -> "OutcomeTable":
        return cls(s, p, [[value] * s for _ in range(s)])


@dataclass(frozen=True)
class DiagWitness:
    u: FiniteFunction
    per_point: tuple[tuple[int, int, int], ...]  # (g(a,a), delta(g(a,a)), u(a))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "g(a,a)", "delta(g(a,a))", "u(a)"])
        for a, row in enumerate(self.per_point):
            w.writerow([a, *row])
        return buf.getvalue()


def is_fixed_point_free(delta: FiniteFunction) -> bool:
    if delta.domain_size != delta.codomain_size:
        raise DiagonalError("delta must map P to itself")
    return all(delta(v) != v for v in range(delta.domain_size))


def count_fixed_point_free(p: int) -> int:
    """Number of fixed-point-free self-maps of {0..p-1}, by enumeration."""
    if p < 1:
        raise DiagonalError("p must be at least 1")
    return sum(
        1 for table in itertools.product(range(p), repeat=p)
        if all(v != k for k, v in enumerate(table))
    )


def fixed_point_free_maps(p: int):
    for table in itertools.product(range(p), repeat=p):
        if all(v != k for k, v in enumerate(table)):
            yield FiniteFunction.endo(table)


def _check_delta(g: OutcomeTable, delta: FiniteFunction):
    if delta.domain_size != delta.codomain_size:
        raise DiagonalError("delta must map P to itself")
    if delta.domain_size != g.p:
        raise DiagonalError(f"delta acts on {delta.domain_size} values, table has p = {g.p}")
    if g.p == 1:
        raise DegenerateError("a one-element P admits no fixed-point-free delta")
    if not is_fixed_point_free(delta):
        raise DiagonalError("delta has a fixed point")


def diagonal(g: OutcomeTable, delta: FiniteFunction) -> FiniteFunction:
    """u(a) = delta(g(a, a)), without any precondition on delta."""
    return FiniteFunction(g.s, g.p, [delta(g.g(a, a)) for a in range(g.s)])


def diag_witness(g: OutcomeTable, delta: FiniteFunction) -> DiagWitness:
    _check_delta(g, delta)
    u = diagonal(g, delta)
    per_point = []
    for a in range(g.s):
        d = g.g(a, a)
        per_point.append((d, delta(d), u(a)))
        # row a cannot express u: they already differ at position a
        assert u(a) != g.row(a)[a]
    return DiagWitness(u, tuple(per_point))


@dataclass
class ExhaustiveReport:
    s: int
    p: int
    tables: int = 0
    deltas: int = 0
    violations: int = 0
    diagonal_failures: int = 0

    def summary(self) -> str:
        return f"{self.tables} tables, {self.deltas} delta{'s' if self.deltas != 1 else ''}, {self.violations} violations"


def exhaustive_unexpressibility(s: int, p: int) -> ExhaustiveReport:
    """Check every g: S x S -> P against every fixed-point-free delta.

    A violation is a table with a row equal to u; a diagonal failure is a
    position a with u(a) = g(a, a).  Both counts must come out zero.
    """
    if not (2 <= p <= 3 and 1 <= s <= 3):
        raise DiagonalError("supported sizes: 2 <= p <= 3, 1 <= s <= 3")
    deltas = [d.table for d in fixed_point_free_maps(p)]
    report = ExhaustiveReport(s, p, deltas=len(deltas))
    for flat in itertools.product(range(p), repeat=s * s):
        report.tables += 1
        rows = [flat[k * s:(k + 1) * s] for k in range(s)]
        diag = [rows[a][a] for a in range(s)]
        for delta in deltas:
            u = tuple(delta[d] for d in diag)
            report.diagonal_failures += sum(u[a] == diag[a] for a in range(s))
            report.violations += any(row == u for row in rows)
    return report


@dataclass
class CounterexampleReport:
    delta: FiniteFunction
    g: OutcomeTable
    u: FiniteFunction
    matching_rows: list[int] = field(default_factory=list)

    @property
    def expressible(self) -> bool:
        return bool(self.matching_rows)


def fixed_point_counterexample(p_star: int, s: int, p: int) -> CounterexampleReport:
    """With delta fixing p_star and g constant p_star, u is a row of g."""
    if not (2 <= p <= 3 and 1 <= s <= 3):
        raise DiagonalError("supported sizes: 2 <= p <= 3, 1 <= s <= 3")
    if not 0 <= p_star < p:
        raise DiagonalError(f"p_star must lie in [0, {p})")
    delta = FiniteFunction.endo(v if v == p_star else (v + 1) % p for v in range(p))
    g = OutcomeTable.constant(s, p, p_star)
    u = diagonal(g, delta)
    matches = [a2 for a2 in range(s) if g.row(a2) == u.table]
    return CounterexampleReport(delta, g, u, matches)


@dataclass
class MeasurementReport:
    witness: DiagWitness
    disturbance: FiniteFunction
    measurements: int
    outcomes: int

    def lines(self) -> list[str]:
        u = self.witness.u.table
        out = [
            f"measurements M = {{0..{self.measurements - 1}}}, outcomes O = {{0..{self.outcomes - 1}}}",
            "disturbance: " + ", ".join(f"{o}->{d}" for o, d in enumerate(self.disturbance.table)),
            f"unmeasurable u = {list(u)}",
        ]
        for m, (g_mm, d, um) in enumerate(self.witness.per_point):
            out.append(f"  m={m}: self-measurement g(m,m)={g_mm}, disturbed to u(m)={um}")
        out.append("no operational measurement h could express u: h(m,m) = delta(h(m,m)) is impossible")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def measurement_report(g: OutcomeTable, delta: FiniteFunction) -> MeasurementReport:
    """The diagonal construction for measurements M and outcomes O."""
    return MeasurementReport(diag_witness(g, delta), delta, g.s, g.p)


def cantor_truncation(rows) -> tuple[int, ...]:
    """Flip the diagonal of n binary expansions truncated to n digits.

    The result differs from the k-th expansion in digit k.
    """
    rows = [tuple(r) for r in rows]
    g = OutcomeTable(len(rows), 2, rows)
    return diag_witness(g, negation()).u.table


# ---------------------------------------------------------------------------
# CSV

def read_table_csv(text: str, p: int) -> OutcomeTable:
    """Rows of g as CSV: line a2 holds g(0, a2), ..., g(s-1, a2)."""
    rows = [[int(v) for v in r] for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
    return OutcomeTable(len(rows), p, rows)


def read_delta_csv(text: str) -> FiniteFunction:
    """delta as CSV: either one row of values or one value per line."""
    values = [int(v) for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#") for v in r if v.strip()]
    return FiniteFunction.endo(values)


def table_to_csv(g: OutcomeTable) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(g.rows)
    return buf.getvalue()
