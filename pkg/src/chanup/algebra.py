"""Split and merge kernels on symbol columns.

Every operation here returns, next to the new columns, the local rows of the
intermediate channel that maps the new symbols back onto the old ones, so the
caller can compose a global upgrade witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from . import kernels
from .channel import SymbolColumn, lr_norm_sq
from .errors import MassTooSmall, NonnegativityViolated, NotProportional, SingularSystem

SPLIT_TOL = 1e-12
PROPORTIONAL_TOL = 1e-10


@dataclass(frozen=True)
class SplitResult:
    """``mid = s1 * v1 + s3 * v3 + leftover`` with ``leftover`` zero on ``solved_pair``.

    ``witness_rows`` are the rows for ``(z1, leftover, z3)`` over ``(v1, mid, v3)``
    where ``z1 = (1 + s1) v1`` and ``z3 = (1 + s3) v3``.
    """

    s1: object
    s3: object
    leftover: SymbolColumn
    solved_pair: tuple
    witness_rows: tuple


@dataclass(frozen=True)
class MergeWitness:
    weights: tuple


class FastPath(NamedTuple):
    z1: SymbolColumn
    leftover: Optional[SymbolColumn]
    z3: SymbolColumn
    s1: object
    c: object  # z3 = (1 + c) * odd up to tolerance


def _exact(*cols) -> bool:
    return all(c.exact for c in cols)


def _split_rows(s1, s3, exact):
    one = 1 if exact else 1.0
    zero = one - one
    return (
        (one / (1 + s1), s1 / (1 + s1), zero),
        (zero, one, zero),
        (zero, s3 / (1 + s3), one / (1 + s3)),
    )


def proportional_split(mid: SymbolColumn, v1: SymbolColumn, v3: SymbolColumn,
                       solved_pair, tol: float = SPLIT_TOL) -> SplitResult:
    """Decompose ``mid`` onto the directions of ``v1`` and ``v3``.

    The 2x2 system ``s1*v1[j] + s3*v3[j] = mid[j]`` is solved for the two
    coordinates in ``solved_pair`` and the leftover is whatever remains. Zero
    entries in the endpoints need no special handling.

    In float mode, scales and leftover entries within ``tol`` (relative to the
    natural scale of each quantity) of zero are snapped to zero. Fraction
    columns are handled exactly.

    Raises
    ------
    SingularSystem
        ``v1`` and ``v3`` are proportional on ``solved_pair``.
    NonnegativityViolated
        a scale or a leftover entry is negative.
    """
    j, k = solved_pair
    if j == k:
        raise ValueError("solved_pair must hold two distinct coordinates")
    if not _exact(mid, v1, v3):
        code, s1, s3, payload = kernels.split_float(
            tuple(map(float, mid.entries)), tuple(map(float, v1.entries)),
            tuple(map(float, v3.entries)), j, k, float(tol))
        if code == kernels.SPLIT_SINGULAR:
            raise SingularSystem(f"endpoints proportional on coordinates {j}, {k}")
        if code == kernels.SPLIT_NEGATIVE:
            which, value = payload
            raise NonnegativityViolated(which if isinstance(which, str) else ("leftover", which), value)
        return SplitResult(s1, s3, SymbolColumn(payload), (j, k), _split_rows(s1, s3, False))

    a, b, c, d = v1[j], v3[j], v1[k], v3[k]
    det = a * d - b * c
    if det == 0:
        raise SingularSystem(f"endpoints proportional on coordinates {j}, {k}")
    s1 = (mid[j] * d - b * mid[k]) / det
    s3 = (a * mid[k] - c * mid[j]) / det
    for name, s in (("s1", s1), ("s3", s3)):
        if s < 0:
            raise NonnegativityViolated(name, s)
    left = []
    for x in range(mid.p):
        if x == j or x == k:
            left.append(0 * mid[x])
            continue
        r = mid[x] - s1 * v1[x] - s3 * v3[x]
        if r < 0:
            raise NonnegativityViolated(("leftover", x), r)
        left.append(r)
    return SplitResult(s1, s3, SymbolColumn(tuple(left)), (j, k), _split_rows(s1, s3, True))


def is_proportional(a: SymbolColumn, b: SymbolColumn, tol: float = PROPORTIONAL_TOL) -> bool:
    if _exact(a, b):
        if a.support != b.support:
            return False
        ma, mb = a.mass, b.mass
        return all(a[x] * mb == b[x] * ma for x in a.support)
    return kernels.proportional_float(tuple(map(float, a.entries)),
                                      tuple(map(float, b.entries)), float(tol))


def merge_proportional(a: SymbolColumn, b: SymbolColumn,
                       tol: float = PROPORTIONAL_TOL) -> tuple:
    """Sum two proportional columns; the weights map the sum back onto ``a`` and ``b``."""
    if not is_proportional(a, b, tol):
        raise NotProportional("columns have different likelihood-ratio vectors")
    ma, mb = a.mass, b.mass
    return a + b, MergeWitness((ma / (ma + mb), mb / (ma + mb)))


def explode(col: SymbolColumn) -> tuple:
    """One singleton column per support element; each maps back to ``col`` with probability 1."""
    zero = 0 * col[0]
    frags = [SymbolColumn(tuple(col[x] if i == x else zero for i in range(col.p)))
             for x in col.support]
    return frags, tuple(1 for _ in frags)


def _subtract_scaled(mid, s, v, zero_at):
    r = [m - s * e for m, e in zip(mid.entries, v.entries)]
    for x in zero_at:
        r[x] = 0 * r[x]
    return r


def _snap(r, tol, mass, exact):
    """Return ``r`` with tiny entries zeroed, or None if any entry is negative."""
    out = []
    for v in r:
        if v < -tol * mass:
            return None
        out.append(v if exact or v > tol * mass else 0.0)
    return out


def odd_fast_path(v1: SymbolColumn, mid: SymbolColumn, odd: SymbolColumn,
                  tol: float = PROPORTIONAL_TOL) -> Optional[FastPath]:
    """Absorb ``mid`` into ``v1`` and an odd symbol with one or two zeros.

    Returns None when the shape preconditions fail or the residual left after
    matching ``v1`` is not proportional to ``odd``. With two zeros the
    residual at the second zero is carved out as a singleton leftover, and the
    roles of the two zeros are swapped once if the first attempt fails.
    """
    support = v1.support
    if mid.support != support:
        return None
    osupp = set(odd.support)
    if not osupp < set(support) or len(osupp) < 2:
        return None
    zeros = [x for x in support if x not in osupp]
    if len(zeros) not in (1, 2):
        return None
    n1, n2 = lr_norm_sq(v1.restrict(support)), lr_norm_sq(mid.restrict(support))
    if not n1 <= n2:
        return None
    exact = _exact(v1, mid, odd)
    if exact:
        tol = 0
    mass = mid.mass
    orders = [zeros] if len(zeros) == 1 else [zeros, zeros[::-1]]
    for order in orders:
        j = order[0]
        s1 = mid[j] / v1[j]
        r = _snap(_subtract_scaled(mid, s1, v1, [j]), tol, mass, exact)
        if r is None:
            continue
        leftover = None
        if len(order) == 2:
            k = order[1]
            if r[k] > 0:
                leftover = SymbolColumn(tuple(r[x] if x == k else 0 * r[x] for x in range(len(r))))
            r[k] = 0 * r[k]
        rcol = SymbolColumn(tuple(r))
        if rcol.mass == 0 or not is_proportional(rcol, odd, tol):
            continue
        return FastPath(v1 + v1.scaled(s1), leftover, odd + rcol, s1, rcol.mass / odd.mass)
    return None


def epsilon_perturb(col: SymbolColumn, xi) -> SymbolColumn:
    """Replace each of the k zeros by ``1/(k*xi)`` and take ``1/xi`` off the largest entry."""
    e = list(col.entries)
    zeros = [x for x, v in enumerate(e) if v == 0]
    if not zeros:
        raise ValueError("column has no zero entries")
    if col.exact and isinstance(xi, (int, Fraction)):
        eps = Fraction(1) / xi
    else:
        eps = 1.0 / xi
        e = [float(v) for v in e]
    top = max(range(len(e)), key=lambda x: e[x])
    if not e[top] > eps:
        raise MassTooSmall(f"largest entry {e[top]} does not exceed 1/xi = {eps}")
    for x in zeros:
        e[x] = eps / len(zeros)
    e[top] -= eps
    return SymbolColumn(tuple(e))
