"""Channel data model, likelihood-ratio vectors and scalar channel metrics.

A channel is stored as a ``p x q`` row-stochastic matrix ``trans[x][y] = W(y|x)``.
Entries are Python floats in ``"float"`` mode and :class:`fractions.Fraction`
in ``"rational"`` mode; every operation in the package is generic over the two.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._rational import Q
from .errors import EmptyChannel, NegativeEntry, RowSumViolation, DimensionMismatch

log = logging.getLogger(__name__)

FLOAT = "float"
RATIONAL = "rational"
ROW_TOL = 1e-9


_EXACT_TYPES = (Fraction, int) if Q is Fraction else (Fraction, int, type(Q(0)))


def is_exact(values) -> bool:
    return all(isinstance(v, _EXACT_TYPES) for v in values)


def to_scalar(value, arith: str):
    if arith == RATIONAL:
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value)
    return float(Fraction(value.strip())) if isinstance(value, str) else float(value)


@dataclass(frozen=True)
class SymbolColumn:
    """Probability column of one output symbol across all inputs."""

    entries: tuple

    @property
    def p(self) -> int:
        return len(self.entries)

    @cached_property
    def support(self) -> tuple:
        return tuple(x for x, v in enumerate(self.entries) if v > 0)

    @cached_property
    def mass(self):
        return sum(self.entries)

    @cached_property
    def exact(self) -> bool:
        return is_exact(self.entries)

    def scaled(self, s) -> "SymbolColumn":
        return SymbolColumn(tuple(s * v for v in self.entries))

    def __add__(self, other: "SymbolColumn") -> "SymbolColumn":
        return SymbolColumn(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "SymbolColumn") -> "SymbolColumn":
        return SymbolColumn(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __getitem__(self, x):
        return self.entries[x]

    def __len__(self):
        return len(self.entries)

    def restrict(self, coords: Sequence[int]) -> "SymbolColumn":
        return SymbolColumn(tuple(self.entries[x] for x in coords))


def column(entries) -> SymbolColumn:
    return SymbolColumn(tuple(entries))


@dataclass(frozen=True)
class Channel:
    """Row-stochastic transition matrix ``trans[x][y] = W(y|x)``."""

    p: int
    q: int
    trans: tuple
    arith_mode: str = FLOAT
    dropped: tuple = field(default=(), compare=False)

    def col(self, y: int) -> SymbolColumn:
        return SymbolColumn(tuple(row[y] for row in self.trans))

    def columns(self) -> list:
        return [SymbolColumn(c) for c in zip(*self.trans)]

    def as_array(self) -> np.ndarray:
        return np.array(self.trans, dtype=float)

    @classmethod
    def from_columns(cls, cols: Sequence[SymbolColumn], p: int, arith: str = FLOAT) -> "Channel":
        if not cols:
            raise EmptyChannel("channel has no output symbols")
        trans = tuple(tuple(c.entries[x] for c in cols) for x in range(p))
        return cls(p, len(cols), trans, arith)


def validate_channel(raw, row_tol: float = ROW_TOL, arith: str | None = None) -> Channel:
    """Build a :class:`Channel` from a ``p x q`` matrix.

    All-zero output columns are dropped and their indices recorded in
    ``Channel.dropped``. ``arith`` defaults to rational when every entry is
    already a ``Fraction`` or ``int``.
    """
    if row_tol <= 0:
        raise ValueError("row_tol must be positive")
    rows = [list(r) for r in raw]
    if not rows or not rows[0]:
        raise EmptyChannel("channel matrix is empty")
    q = len(rows[0])
    if any(len(r) != q for r in rows):
        raise DimensionMismatch("rows have different lengths")
    if arith is None:
        arith = RATIONAL if all(is_exact(r) for r in rows) else FLOAT
    rows = [[to_scalar(v, arith) for v in r] for r in rows]
    for x, r in enumerate(rows):
        for y, v in enumerate(r):
            if v < 0 or (arith == FLOAT and math.isnan(v)):
                raise NegativeEntry(x, y, v)
        s = sum(r) if arith == RATIONAL else math.fsum(r)
        if (arith == RATIONAL and s != 1) or (arith == FLOAT and abs(s - 1.0) > row_tol):
            raise RowSumViolation(x, s)
    keep = [y for y in range(q) if any(r[y] > 0 for r in rows)]
    dropped = tuple(y for y in range(q) if y not in set(keep))
    if dropped:
        log.info("dropped zero-mass output columns %s", list(dropped))
    if not keep:
        raise EmptyChannel("every output column has zero mass")
    trans = tuple(tuple(r[y] for y in keep) for r in rows)
    return Channel(len(rows), len(keep), trans, arith, dropped)


@dataclass(frozen=True)
class LRVector:
    values: tuple
    reference_input: int


def lr_vector(col: SymbolColumn) -> LRVector:
    e = col.entries
    ref = 0 if e[0] > 0 else col.support[0]
    return LRVector(tuple(e[ref] / v if v > 0 else math.inf for v in e), ref)


def lr_norm_sq(col: SymbolColumn):
    """Squared Euclidean LR norm; exact for Fraction columns, ``inf`` if odd."""
    e = col.entries
    if any(v == 0 for v in e):
        return math.inf
    ref = e[0]
    return sum((ref / v) ** 2 for v in e)


def lr_norm(lr: LRVector) -> float:
    if any(v == math.inf for v in lr.values):
        return math.inf
    return math.sqrt(float(sum(v * v for v in lr.values)))


class SymbolClass(enum.Enum):
    NORMAL = "normal"
    LEFTOVER = "leftover"
    ODD_OTHER = "odd"

    @property
    def is_odd(self) -> bool:
        return self is not SymbolClass.NORMAL


def classify_symbol(col: SymbolColumn, p: int | None = None) -> SymbolClass:
    p = col.p if p is None else p
    s = len(col.support)
    if s == p:
        return SymbolClass.NORMAL
    if s == 1 or p - s == 2:
        return SymbolClass.LEFTOVER
    return SymbolClass.ODD_OTHER


def symmetric_capacity(ch: Channel) -> float:
    """Mutual information in bits between a uniform input and the output.

    Computed as ``log2 p - H(X|Y)`` so that a noiseless channel gives exactly
    ``log2 p``.
    """
    w = ch.as_array()
    colsum = w.sum(axis=0)
    post = w / colsum
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(post > 0, post * np.log2(np.where(post > 0, post, 1.0)), 0.0)
    cond = -(colsum / ch.p) @ plogp.sum(axis=0)
    return float(min(max(math.log2(ch.p) - cond, 0.0), math.log2(ch.p)))


def ml_error_probability(ch: Channel):
    """Maximum-likelihood decision error with a uniform prior (exact in rational mode)."""
    best = sum(max(c) for c in zip(*ch.trans))
    pe = 1 - best / ch.p
    if ch.arith_mode == FLOAT:
        return float(max(pe, 0.0))
    return pe
