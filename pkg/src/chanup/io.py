"""Plain-text channel format and seeded random channels.

Format::

    # comment lines start with '#'; blank lines are ignored
    p q
    W(0|0) W(1|0) ... W(q-1|0)
    ...                          (p rows, one per input)

Entries are decimal literals or rationals ``a/b``. A file containing any
``a/b`` is read in rational mode unless the caller forces a mode. Witness
files use the same grammar with header ``|Z| |Y|``.

Random channels use numpy's PCG64 bit generator seeded with ``seed``
(``numpy.random.default_rng``); draws are consumed row by row in C order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import FLOAT, RATIONAL, ROW_TOL, Channel, validate_channel
from .errors import ChannelSyntaxError, DimensionMismatch, InvalidSpec
from .reducer import IntermediateChannel

RATIONAL_GRID = 10**6


def _parse_matrix(text):
    header, rows = None, []
    lineno = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        toks = s.split()
        if header is None:
            if len(toks) != 2:
                raise ChannelSyntaxError(lineno, "header must be two integers 'rows cols'")
            try:
                header = (int(toks[0]), int(toks[1]))
            except ValueError:
                raise ChannelSyntaxError(lineno, "header must be two integers") from None
            if header[0] < 1 or header[1] < 1:
                raise ChannelSyntaxError(lineno, "dimensions must be positive")
            continue
        for t in toks:
            try:
                Fraction(t)
            except (ValueError, ZeroDivisionError):
                raise ChannelSyntaxError(lineno, f"bad number {t!r}") from None
        if len(toks) != header[1]:
            raise DimensionMismatch(f"line {lineno}: expected {header[1]} entries, got {len(toks)}")
        rows.append(toks)
    if header is None:
        raise ChannelSyntaxError(lineno, "missing header")
    if len(rows) != header[0]:
        raise DimensionMismatch(f"expected {header[0]} rows, got {len(rows)}")
    return rows


def _mode(rows, arith):
    if arith is not None:
        return arith
    return RATIONAL if any("/" in t for r in rows for t in r) else FLOAT


def _convert(rows, arith):
    if arith == RATIONAL:
        return [[Fraction(t) for t in r] for r in rows]
    return [[float(t) for t in r] for r in rows]


def parse_channel_text(text: str, arith: str | None = None, row_tol: float = ROW_TOL) -> Channel:
    rows = _parse_matrix(text)
    arith = _mode(rows, arith)
    return validate_channel(_convert(rows, arith), row_tol=row_tol, arith=arith)


def parse_witness_text(text: str, arith: str | None = None) -> IntermediateChannel:
    rows = _parse_matrix(text)
    return IntermediateChannel(tuple(map(tuple, _convert(rows, _mode(rows, arith)))))


def _fmt(v, arith):
    if arith == RATIONAL:
        v = Fraction(v)
        return f"{v.numerator}/{v.denominator}"
    return format(float(v), ".17g")


def _write_matrix(rows, arith, comments=()):
    rows = [list(r) for r in rows]
    lines = [f"# {c}" for c in comments]
    lines.append(f"{len(rows)} {len(rows[0])}")
    lines.extend(" ".join(_fmt(v, arith) for v in r) for r in rows)
    return "\n".join(lines) + "\n"


def write_channel_text(ch: Channel, comments=()) -> str:
    return _write_matrix(ch.trans, ch.arith_mode, comments)


def write_witness_text(witness: IntermediateChannel, arith: str = FLOAT) -> str:
    return _write_matrix(witness.matrix, arith)


@dataclass(frozen=True)
class GenSpec:
    """Recipe for a random channel.

    ``clustered`` draws ``k`` column directions (``centers="random"``: unit
    exponential entries; ``"unit"``: the basis vector ``e_(c mod p)``), gives
    column ``y`` the centre ``y mod k`` with per-entry jitter ``exp(sigma*g)``,
    ``g`` standard normal, and finally normalizes every row. In rational mode
    each draw is rounded up to a multiple of ``1/RATIONAL_GRID`` before exact
    normalization.
    """

    p: int
    q: int
    dist: str = "dirichlet"
    seed: int = 0
    k: int | None = None
    sigma: float = 0.0
    centers: str = "random"
    arith: str = FLOAT

    def validate(self):
        if self.p < 2 or self.q < 1:
            raise InvalidSpec("need p >= 2 and q >= 1")
        if self.dist not in ("dirichlet", "clustered"):
            raise InvalidSpec(f"unknown distribution {self.dist!r}")
        if self.dist == "clustered":
            k = self.k_eff
            if not 1 <= k <= self.q:
                raise InvalidSpec("clustered needs 1 <= k <= q")
            if self.centers not in ("random", "unit"):
                raise InvalidSpec(f"unknown centers {self.centers!r}")
            if self.sigma < 0:
                raise InvalidSpec("sigma must be nonnegative")
        if self.arith not in (FLOAT, RATIONAL):
            raise InvalidSpec(f"unknown arithmetic {self.arith!r}")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec("seed must fit in 64 bits")

    @property
    def k_eff(self) -> int:
        return self.p if self.k is None else self.k

    def describe(self) -> list:
        out = [f"seed: {self.seed}", f"dist: {self.dist} p={self.p} q={self.q} arith={self.arith}"]
        if self.dist == "clustered":
            out.append(f"clustered: k={self.k_eff} sigma={self.sigma!r} centers={self.centers}")
        return out


def _draw(spec: GenSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    p, q = spec.p, spec.q
    if spec.dist == "dirichlet":
        return rng.standard_exponential((p, q))
    k = spec.k_eff
    if spec.centers == "unit":
        centers = np.zeros((k, p))
        centers[np.arange(k), np.arange(k) % p] = 1.0
    else:
        centers = rng.standard_exponential((k, p))
    g = rng.standard_normal((q, p))
    cols = centers[np.arange(q) % k] * np.exp(spec.sigma * g)
    return cols.T


def gen_random_channel(spec: GenSpec) -> Channel:
    spec.validate()
    raw = _draw(spec)
    if spec.arith == RATIONAL:
        ints = np.where(raw > 0, np.ceil(raw * RATIONAL_GRID), 0).astype(np.int64)
        rows = [[Fraction(int(v), int(r.sum())) for v in r] for r in ints]
    else:
        rows = (raw / raw.sum(axis=1, keepdims=True)).tolist()
    return validate_channel(rows, arith=spec.arith)


def gen_channel_text(spec: GenSpec) -> str:
    return write_channel_text(gen_random_channel(spec), spec.describe())
