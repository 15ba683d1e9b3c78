"""Output-alphabet reduction producing an upgraded channel and its witness.

Columns are grouped into strata by exact support. Each stratum of support
size ``m >= 3`` is reduced to two survivors by repeatedly splitting the middle
of the three lowest-norm symbols onto the outer two; the leftover of each split
lives on the first ``m - 2`` support coordinates and is handed to that smaller
stratum. Support-size-2 strata reduce by exact binary splits and singleton
strata are merged into one symbol. For a channel with only full-support
columns this ends with ``2 + 2 + ... + 1 = p`` symbols.

Witness bookkeeping: each live symbol ``z`` carries a row ``P(.|z)`` over the
original output alphabet, and ``W = sum_z col_z (x) row_z`` is kept invariant.
Every kernel step replaces a handful of rows by convex combinations of the old
ones, which is the product with a local block of the intermediate channel.
"""

from __future__ import annotations

import heapq
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import kernels
from .algebra import (
    SplitResult,
    PROPORTIONAL_TOL,
    SPLIT_TOL,
    explode,
    is_proportional,
    odd_fast_path,
    proportional_split,
)
from .channel import (
    FLOAT,
    RATIONAL,
    Channel,
    SymbolColumn,
    lr_norm_sq,
    ml_error_probability,
    symmetric_capacity,
)
from ._rational import Q, to_fraction
from .errors import NonnegativityViolated, SingularSystem

log = logging.getLogger(__name__)

STRATIFIED = "stratified"
FOLDED = "folded"

ALT_MIDDLE = "alternate-middle"
ALT_TRIPLE = "alternate-triple"
ALT_PAIR = "alternate-coordinate-pair"
EXPLODE = "explode"
STRATEGIES = (ALT_MIDDLE, ALT_TRIPLE, ALT_PAIR, EXPLODE)
DEFAULT_LADDER = (ALT_MIDDLE, ALT_PAIR, EXPLODE)

# strategies whose leftovers land outside the canonical leftover stratum
FRAGMENTING = (ALT_PAIR, EXPLODE)


@dataclass(frozen=True)
class ReductionConfig:
    """Knobs for :func:`upgrade_reduce`.

    ``target_size=None`` means ``p``. ``alternate-triple`` is an optional
    ladder rung that scans later triples of the stratum with the canonical
    coordinate pair before fragmenting anything; it is off by default.
    ``explode_all`` turns every column into singletons first, which yields the
    noiseless channel.
    """

    target_size: int | None = None
    mode: str = STRATIFIED
    fallback_ladder: tuple = DEFAULT_LADDER
    split_tol: float = SPLIT_TOL
    merge_tol: float = PROPORTIONAL_TOL
    tie_break: str = "lexicographic"
    explode_all: bool = False

    def __post_init__(self):
        if self.mode not in (STRATIFIED, FOLDED):
            raise ValueError(f"unknown mode {self.mode!r}")
        ladder = tuple(self.fallback_ladder)
        if not ladder or ladder[-1] != EXPLODE:
            raise ValueError("fallback ladder must be non-empty and end with 'explode'")
        bad = [s for s in ladder if s not in STRATEGIES]
        if bad:
            raise ValueError(f"unknown fallback strategies {bad}")
        if self.tie_break != "lexicographic":
            raise ValueError(f"unknown tie-break rule {self.tie_break!r}")
        object.__setattr__(self, "fallback_ladder", ladder)

    def target(self, p: int) -> int:
        t = p if self.target_size is None else self.target_size
        if t < p:
            raise ValueError(f"target_size {t} is smaller than p = {p}")
        return t


@dataclass(frozen=True)
class IntermediateChannel:
    """Row-stochastic witness ``P(y|z)``, indexed ``matrix[z][y]``."""

    matrix: tuple

    @property
    def shape(self):
        return len(self.matrix), len(self.matrix[0]) if self.matrix else 0

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=float)

    @classmethod
    def identity(cls, n: int, exact: bool = False) -> "IntermediateChannel":
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))


@dataclass
class StratumLog:
    support: tuple
    size_in: int
    size_out: int = 0
    rounds: int = 0
    fallbacks: Counter = field(default_factory=Counter)


@dataclass
class UpgradeReport:
    initial_size: int
    final_size: int
    capacity_before: float
    capacity_after: float
    error_prob_before: object
    error_prob_after: object
    strata: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    fallbacks: Counter = field(default_factory=Counter)
    reverted: bool = False

    @property
    def fallback_count(self) -> int:
        return sum(self.fallbacks.values())

    @property
    def fragmented(self) -> bool:
        """True when some fallback moved mass off the canonical leftover strata."""
        return any(self.fallbacks[k] for k in FRAGMENTING)

    def lines(self) -> list:
        out = [
            f"initial_size: {self.initial_size}",
            f"final_size: {self.final_size}",
            f"fallbacks: {self.fallback_count}",
            f"capacity_before: {self.capacity_before!r}",
            f"capacity_after: {self.capacity_after!r}",
            f"error_before: {_fmt(self.error_prob_before)}",
            f"error_after: {_fmt(self.error_prob_after)}",
        ]
        for kind in STRATEGIES:
            out.append(f"fallbacks_{kind}: {self.fallbacks[kind]}")
        out.append(f"reverted: {str(self.reverted).lower()}")
        return out

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def _fmt(v):
    return f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else repr(float(v))


def partition_strata(ch: Channel) -> dict:
    """Group the channel's columns by exact support set (largest supports first)."""
    strata = {}
    for col in ch.columns():
        strata.setdefault(col.support, []).append(col)
    return dict(sorted(strata.items(), key=lambda kv: (-len(kv[0]), kv[0])))


def _sort_key(col: SymbolColumn, support):
    r = col.restrict(support)
    return (lr_norm_sq(r), r.entries)


def order_stratum(cols, support=None) -> list:
    """Permutation sorting columns ascending by LR norm on the shared support.

    Ties are broken by lexicographic comparison of the restricted entries.
    """
    if not cols:
        return []
    support = cols[0].support if support is None else tuple(support)
    return sorted(range(len(cols)), key=lambda i: _sort_key(cols[i], support))


class _Work:
    """Live symbols, their witness rows and the pending strata.

    Rows are kept unnormalized: ``U[z][y]`` is the probability mass (summed
    over inputs) carried from original symbol ``y`` into ``z``, so
    ``P(y|z) = U[z][y] / mass(z)``. Merges then add rows and splits only
    rescale the middle symbol's row. Rational rows are sparse dicts over ``Q``.
    """

    def __init__(self, cols, q, exact, cfg):
        self.exact = exact
        self.cfg = cfg
        self.q = q
        self.cols = {}
        self.U = {}
        self.next_id = 0
        self.strata = {}
        self.heap = []
        self.steps = []
        self.fallbacks = Counter()
        for y, col in enumerate(cols):
            if exact:
                col = SymbolColumn(tuple(Q(v) for v in col.entries))
                row = {y: col.mass}
            else:
                row = np.zeros(q)
                row[y] = col.mass
            self.add(col, row)

    @property
    def count(self):
        return len(self.cols)

    def add(self, col, row):
        i = self.next_id
        self.next_id += 1
        self.cols[i] = col
        self.U[i] = row
        s = col.support
        if s not in self.strata:
            self.strata[s] = []
            heapq.heappush(self.heap, (-len(s), s))
        self.strata[s].append(i)
        return i

    def remove(self, i):
        del self.cols[i]
        return self.U.pop(i)

    def _scaled(self, row, c):
        if self.exact:
            c = Q(c)
            return {y: c * v for y, v in row.items()}
        return c * row

    def _accumulate(self, i, row, c):
        """``U[i] += c * row`` in place."""
        if self.exact:
            c = Q(c)
            dst = self.U[i]
            for y, v in row.items():
                dst[y] = dst.get(y, 0) + c * v
        else:
            self.U[i] += c * row

    def merge(self, a, b):
        cb = self.cols[b]
        rb = self.remove(b)
        self.cols[a] = self.cols[a] + cb
        self._accumulate(a, rb, 1)
        self.steps.append(("merge", 2, 1))

    def transfer(self, mid, grow, leftover=None):
        """Remove ``mid`` and hand its row to the symbols in ``grow``.

        ``grow`` maps symbol id to ``(new_column, absorbed_mass)``; the
        leftover column, if any, becomes a new symbol.
        """
        mm = self.cols[mid].mass
        rm = self.remove(mid)
        for i, (col, absorbed) in grow.items():
            self.cols[i] = col
            if absorbed:
                self._accumulate(i, rm, absorbed / mm)
        if leftover is not None and leftover.mass > 0:
            self.add(leftover, self._scaled(rm, leftover.mass / mm))
            return True
        return False

    def apply_split(self, v1, mid, v3, res):
        c1, c3 = self.cols[v1], self.cols[v3]
        made = self.transfer(mid, {
            v1: (c1.scaled(1 + res.s1), res.s1 * c1.mass),
            v3: (c3.scaled(1 + res.s3), res.s3 * c3.mass),
        }, res.leftover)
        self.steps.append(("split", 3, 3 if made else 2))

    def apply_explode(self, i):
        col = self.cols[i]
        m = col.mass
        row = self.remove(i)
        frags, _ = explode(col)
        for f in frags:
            self.add(f, self._scaled(row, f.mass / m))
        self.steps.append(("explode", 1, len(frags)))

    def column(self, i) -> SymbolColumn:
        col = self.cols[i]
        if self.exact:
            return SymbolColumn(tuple(to_fraction(v) for v in col.entries))
        return col

    def witness_row(self, i):
        m = self.cols[i].mass
        row = self.U[i]
        if self.exact:
            m = Q(m)
            out = [Fraction(0)] * self.q
            for y, v in row.items():
                out[y] = to_fraction(v / m)
            return tuple(out)
        return tuple((row / m).tolist())


def _prop(work, i, k):
    a, b = work.cols[i], work.cols[k]
    if work.exact:
        return is_proportional(a, b, work.cfg.merge_tol)
    return kernels.proportional_float(a.entries, b.entries, work.cfg.merge_tol)


def _try_split(work, mid, v1, v3, pair):
    cm, c1, c3 = work.cols[mid], work.cols[v1], work.cols[v3]
    if work.exact:
        try:
            return proportional_split(cm, c1, c3, pair, work.cfg.split_tol)
        except (SingularSystem, NonnegativityViolated):
            return None
    # float hot path: status codes instead of exceptions
    code, s1, s3, left = kernels.split_float(cm.entries, c1.entries, c3.entries,
                                             pair[0], pair[1], work.cfg.split_tol)
    if code != kernels.SPLIT_OK:
        return None
    return SplitResult(s1, s3, SymbolColumn(left), pair, ())


def _step(work, order, support, slog):
    """One round on the three lowest symbols of ``order``; mutates ``order``."""
    a, b, c = order[0], order[1], order[2]
    canon = (support[-2], support[-1])

    res = _try_split(work, b, a, c, canon)
    if res is not None:
        work.apply_split(a, b, c, res)
        order.remove(b)
        return

    for strategy in work.cfg.fallback_ladder:
        done = False
        if strategy == ALT_MIDDLE:
            for mid, e1, e3 in ((a, b, c), (c, a, b)):
                res = _try_split(work, mid, e1, e3, canon)
                if res is not None:
                    work.apply_split(e1, mid, e3, res)
                    order.remove(mid)
                    done = True
                    break
        elif strategy == ALT_TRIPLE:
            for t in range(1, len(order) - 2):
                e1, mid, e3 = order[t], order[t + 1], order[t + 2]
                res = _try_split(work, mid, e1, e3, canon)
                if res is not None:
                    work.apply_split(e1, mid, e3, res)
                    order.remove(mid)
                    done = True
                    break
        elif strategy == ALT_PAIR:
            pairs = sorted(combinations(support, 2), reverse=True)
            for pair in pairs:
                if pair == canon:
                    continue
                for mid, e1, e3 in ((b, a, c), (a, b, c), (c, a, b)):
                    res = _try_split(work, mid, e1, e3, pair)
                    if res is not None:
                        work.apply_split(e1, mid, e3, res)
                        order.remove(mid)
                        done = True
                        break
                if done:
                    break
        elif strategy == EXPLODE:
            work.apply_explode(b)
            order.remove(b)
            done = True
        if done:
            slog.fallbacks[strategy] += 1
            work.fallbacks[strategy] += 1
            return
    raise AssertionError("fallback ladder did not terminate")  # pragma: no cover


def _reduce(work, support, ids, target, slog):
    order = sorted(ids, key=lambda i: _sort_key(work.cols[i], support))
    if len(support) == 1:
        while len(order) > 1 and work.count > target:
            work.merge(order[0], order.pop(1))
            slog.rounds += 1
        return order
    out = []
    for i in order:
        if out and work.count > target and _prop(work, out[-1], i):
            work.merge(out[-1], i)
        else:
            out.append(i)
    order = out
    while len(order) > 2 and work.count > target:
        merged = False
        for t in (0, 1):
            if _prop(work, order[t], order[t + 1]):
                work.merge(order[t], order.pop(t + 1))
                merged = True
                break
        if not merged:
            _step(work, order, support, slog)
        slog.rounds += 1
    return order


def _odd_candidates(work, support):
    """Pending symbols that are odd relative to ``support`` and not singletons."""
    sset = set(support)
    found = []
    for s in sorted(work.strata, key=lambda s: (-len(s), s)):
        if len(s) >= 2 and set(s) < sset:
            ids = [i for i in work.strata[s] if i in work.cols]
            found.extend(sorted(ids, key=lambda i: work.cols[i].entries))
    return found


def _absorb_odd(work, order, support, odd, slog):
    """Folded mode: split the upper normal survivor onto the lower one and an odd symbol."""
    v1, mid = order
    c1, cm, co = work.cols[v1], work.cols[mid], work.cols[odd]
    zeros = len(set(support) - set(co.support))

    def fast():
        fp = odd_fast_path(c1, cm, co, work.cfg.merge_tol)
        if fp is None:
            return False
        made = work.transfer(mid, {
            v1: (fp.z1, fp.s1 * c1.mass),
            odd: (fp.z3, fp.z3.mass - co.mass),
        }, fp.leftover)
        work.steps.append(("fast", 3, 3 if made else 2))
        order.remove(mid)
        slog.fallbacks["odd-fast-path"] += 1
        return True

    def general():
        pairs = [(support[-2], support[-1])] + [
            pr for pr in sorted(combinations(support, 2), reverse=True)
            if pr != (support[-2], support[-1])]
        for pair in pairs:
            res = _try_split(work, mid, v1, odd, pair)
            if res is not None:
                work.apply_split(v1, mid, odd, res)
                order.remove(mid)
                slog.fallbacks["odd-split"] += 1
                return True
        return False

    attempts = (fast, general) if zeros == 1 else (general, fast)
    return any(f() for f in attempts)


def upgrade_reduce(ch: Channel, cfg: ReductionConfig | None = None):
    """Reduce the output alphabet of ``ch`` to an upgraded channel.

    Returns ``(q_prime, witness, report)`` with ``W = q_prime . witness``.
    If explode fallbacks leave more symbols than ``ch`` had, ``ch`` itself is
    returned with the identity witness and ``report.reverted`` set; the
    report still counts the fallbacks that fired. ``explode_all`` runs are
    never reverted.
    """
    cfg = ReductionConfig() if cfg is None else cfg
    target = cfg.target(ch.p)
    exact = ch.arith_mode == RATIONAL
    cap0, err0 = symmetric_capacity(ch), ml_error_probability(ch)
    if ch.q <= target and not cfg.explode_all:
        return ch, IntermediateChannel.identity(ch.q, exact), UpgradeReport(
            ch.q, ch.q, cap0, cap0, err0, err0)

    work = _Work(ch.columns(), ch.q, exact, cfg)
    if cfg.explode_all:
        for i in list(work.cols):
            if len(work.cols[i].support) > 1:
                work.strata[work.cols[i].support].remove(i)
                work.apply_explode(i)

    logs = []
    survivors = []
    while work.heap:
        _, support = heapq.heappop(work.heap)
        ids = [i for i in work.strata.pop(support) if i in work.cols]
        if not ids:
            continue
        slog = StratumLog(support, len(ids))
        order = _reduce(work, support, ids, target, slog)
        if cfg.mode == FOLDED and len(order) == 2 and len(support) >= 3:
            cands = _odd_candidates(work, support)
            if cands and _absorb_odd(work, order, support, cands[0], slog):
                slog.rounds += 1
        slog.size_out = len(order)
        logs.append(slog)
        survivors.extend(order)
        log.debug("stratum %s: %d -> %d", support, slog.size_in, slog.size_out)

    if len(survivors) > ch.q and not cfg.explode_all:
        # fragments never re-merged; the input itself is the better upgrade
        log.info("reduction grew %d -> %d symbols; returning the input", ch.q, len(survivors))
        return ch, IntermediateChannel.identity(ch.q, exact), UpgradeReport(
            ch.q, ch.q, cap0, cap0, err0, err0, strata=logs, steps=work.steps,
            fallbacks=work.fallbacks, reverted=True)

    cols = [work.column(i) for i in survivors]
    q_prime = Channel.from_columns(cols, ch.p, ch.arith_mode)
    witness = IntermediateChannel(tuple(work.witness_row(i) for i in survivors))
    report = UpgradeReport(
        initial_size=ch.q,
        final_size=len(cols),
        capacity_before=cap0,
        capacity_after=symmetric_capacity(q_prime),
        error_prob_before=err0,
        error_prob_after=ml_error_probability(q_prime),
        strata=logs,
        steps=work.steps,
        fallbacks=work.fallbacks,
    )
    return q_prime, witness, report


def reduce_stratum(cols, cfg: ReductionConfig | None = None, support=None):
    """Reduce one stratum in isolation.

    Returns ``(survivors, leftovers, witness)`` where ``witness[k]`` is the row
    of the local intermediate channel for output ``k`` of ``survivors +
    leftovers``, indexed over the input ``cols``. Exploded fragments are
    returned among the leftovers.
    """
    cfg = ReductionConfig() if cfg is None else cfg
    cols = list(cols)
    support = cols[0].support if support is None else tuple(support)
    exact = all(c.exact for c in cols)
    work = _Work(cols, len(cols), exact, cfg)
    ids = work.strata.pop(support)
    work.heap = []
    slog = StratumLog(support, len(ids))
    order = _reduce(work, support, ids, 0, slog)
    rest = [i for i in work.cols if i not in set(order)]
    surv = [work.column(i) for i in order]
    left = [work.column(i) for i in rest]
    rows = [work.witness_row(i) for i in order + rest]
    return surv, left, rows
