# logic/reduction/cnf.py
from __future__ import annotations

import itertools
from typing import Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from common.errors import CnfParseError

MAX_CLAUSE = 3


class CnfFormula(BaseModel):
    """Atoms 1..n; each clause holds one to three signed atom indices."""

    model_config = ConfigDict(frozen=True)

    n: int
    clauses: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check(self) -> "CnfFormula":
        if self.n < 0:
            raise ValueError("atom count must be >= 0")
        for j, clause in enumerate(self.clauses, start=1):
            if not clause:
                raise ValueError(f"clause {j} is empty")
            if len(clause) > MAX_CLAUSE:
                raise ValueError(f"clause {j} has {len(clause)} literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n:
                    raise ValueError(f"clause {j}: literal {lit} out of range 1..{self.n}")
        return self

    @property
    def m(self) -> int:
        return len(self.clauses)

    def occurrences(self, atom: int) -> List[Tuple[int, bool]]:
        """(clause index, positive?) for every literal of `atom`, in clause order; clauses from 1."""
        return [(j, lit > 0) for j, clause in enumerate(self.clauses, start=1)
                for lit in clause if abs(lit) == atom]

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n} {self.m}"]
        lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in self.clauses]
        return "\n".join(lines) + "\n"


class Assignment(BaseModel):
    model_config = ConfigDict(frozen=True)

    values: Tuple[bool, ...]

    def __getitem__(self, atom: int) -> bool:
        return self.values[atom - 1]

    def __len__(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return ", ".join(f"x{i}={'T' if v else 'F'}" for i, v in enumerate(self.values, start=1))


def satisfies(formula: CnfFormula, assignment: Assignment) -> bool:
    if len(assignment) != formula.n:
        return False
    return all(any(assignment[abs(lit)] == (lit > 0) for lit in clause) for clause in formula.clauses)


def assignments(n: int) -> Iterator[Assignment]:
    for values in itertools.product((False, True), repeat=n):
        yield Assignment(values=values)


def solve_by_truth_table(formula: CnfFormula) -> Optional[Assignment]:
    return next((a for a in assignments(formula.n) if satisfies(formula, a)), None)


def parse_dimacs(text: str) -> CnfFormula:
    header: Optional[Tuple[int, int]] = None
    clauses: List[Tuple[int, ...]] = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise CnfParseError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfParseError(f"line {lineno}: malformed header {line!r}") from None
            continue
        if header is None:
            raise CnfParseError(f"line {lineno}: clause before the 'p cnf' header")
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise CnfParseError(f"line {lineno}: bad literal {token!r}") from None
            if lit == 0:
                if not current:
                    raise CnfParseError(f"line {lineno}: empty clause")
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > header[0]:
                raise CnfParseError(f"line {lineno}: literal {lit} out of range 1..{header[0]}")
            current.append(lit)
            if len(current) > MAX_CLAUSE:
                raise CnfParseError(f"line {lineno}: clause has more than {MAX_CLAUSE} literals")
    if header is None:
        raise CnfParseError("missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != header[1]:
        raise CnfParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(n=header[0], clauses=tuple(clauses))
