"""Independent checks of the upgrade relation ``W = Q' . P``.

Nothing here reuses the reduction kernels. :func:`feasibility_oracle` decides
whether any witness exists by running an exact rational phase-one simplex on the
linear system in the witness entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import FLOAT, RATIONAL, Channel, is_exact, ml_error_probability, symmetric_capacity
from .errors import DimensionMismatch, InstanceTooLarge
from .reducer import IntermediateChannel

VERIFY_TOL = 1e-9
ORACLE_LIMITS = {"p": 5, "y": 6, "z": 6}


@dataclass(frozen=True)
class VerifyReport:
    max_abs_residual: object
    rows_ok: bool
    verdict: str
    delta_capacity: float
    delta_error_prob: object

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _exact_pair(q_prime, witness) -> bool:
    return q_prime.arith_mode == RATIONAL and all(is_exact(r) for r in witness.matrix)


def compose(q_prime: Channel, witness: IntermediateChannel) -> Channel:
    """``sum_z Q'(z|x) P(y|z)`` as a channel on the witness' output alphabet."""
    nz, ny = witness.shape
    if nz != q_prime.q:
        raise DimensionMismatch(f"Q' has {q_prime.q} outputs but the witness has {nz} rows")
    if _exact_pair(q_prime, witness):
        trans = tuple(
            tuple(sum(row[z] * witness.matrix[z][y] for z in range(nz)) for y in range(ny))
            for row in q_prime.trans)
        return Channel(q_prime.p, ny, trans, RATIONAL)
    prod = q_prime.as_array() @ witness.as_array()
    return Channel(q_prime.p, ny, tuple(map(tuple, prod.tolist())), FLOAT)


def metrics_delta(w: Channel, q_prime: Channel) -> tuple:
    """``(I(Q') - I(W), Pe(Q') - Pe(W))``."""
    if w.p != q_prime.p:
        raise DimensionMismatch("channels have different input alphabets")
    return (symmetric_capacity(q_prime) - symmetric_capacity(w),
            ml_error_probability(q_prime) - ml_error_probability(w))


def _rows_stochastic(rows, tol, exact) -> bool:
    for r in rows:
        if any(v < 0 for v in r):
            return False
        s = sum(r)
        if (exact and s != 1) or (not exact and abs(float(s) - 1.0) > tol):
            return False
    return True


def check_upgrade_witness(w: Channel, q_prime: Channel, witness: IntermediateChannel,
                          tol: float = VERIFY_TOL) -> VerifyReport:
    if w.p != q_prime.p:
        raise DimensionMismatch("channels have different input alphabets")
    nz, ny = witness.shape
    if ny != w.q:
        raise DimensionMismatch(f"witness maps onto {ny} outputs, W has {w.q}")
    composed = compose(q_prime, witness)
    exact = w.arith_mode == RATIONAL and composed.arith_mode == RATIONAL
    if exact:
        resid = max(abs(a - b) for ra, rb in zip(w.trans, composed.trans) for a, b in zip(ra, rb))
    else:
        resid = float(np.max(np.abs(w.as_array() - composed.as_array())))
    rows_ok = (_rows_stochastic(witness.matrix, tol, exact)
               and _rows_stochastic(q_prime.trans, tol, q_prime.arith_mode == RATIONAL))
    ok = rows_ok and (resid == 0 if exact else resid <= tol)
    dc, de = metrics_delta(w, q_prime)
    return VerifyReport(resid, rows_ok, "pass" if ok else "fail", dc, de)


def _phase_one(A, b) -> bool:
    """Exact phase-one simplex: does ``A x = b, x >= 0`` have a solution?

    Bland's rule keeps it cycle-free.
    """
    m, n = len(A), len(A[0])
    T = []
    for i in range(m):
        row, rhs = list(A[i]), b[i]
        if rhs < 0:
            row, rhs = [-v for v in row], -rhs
        T.append(row + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m + 1
    obj = [-sum(T[i][j] for i in range(m)) for j in range(n)] + [Fraction(0)] * m
    obj.append(-sum(T[i][-1] for i in range(m)))
    while True:
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                key = (T[i][-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # pragma: no cover - phase one is bounded
            break
        r = best[1]
        piv = T[r][enter]
        T[r] = [v / piv for v in T[r]]
        pr = T[r]
        for i in range(m):
            f = T[i][enter]
            if i != r and f != 0:
                Ti = T[i]
                T[i] = [Ti[k] - f * pr[k] for k in range(width)]
        f = obj[enter]
        obj = [obj[k] - f * pr[k] for k in range(width)]
        basis[r] = enter
    return obj[-1] == 0


def feasibility_oracle(w: Channel, q_prime: Channel, tol=0) -> bool:
    """Decide whether some row-stochastic ``P`` gives ``W = Q' . P``.

    Float entries are converted to their exact binary values. With ``tol > 0``
    each equation only has to hold within ``tol``; this is what float channels
    read back from text need.
    """
    p, ny, nz = w.p, w.q, q_prime.q
    if q_prime.p != p:
        raise DimensionMismatch("channels have different input alphabets")
    if p > ORACLE_LIMITS["p"] or ny > ORACLE_LIMITS["y"] or nz > ORACLE_LIMITS["z"]:
        raise InstanceTooLarge(f"oracle handles p<=5, |Y|<=6, |Z|<=6; got {p}, {ny}, {nz}")
    F = Fraction
    tol = F(tol)
    nvar = nz * ny

    def var(z, y):
        return z * ny + y

    eq_rows, eq_rhs, ub_rows, ub_rhs = [], [], [], []
    for x in range(p):
        for y in range(ny):
            row = [F(0)] * nvar
            for z in range(nz):
                row[var(z, y)] = F(q_prime.trans[x][z])
            target = F(w.trans[x][y])
            if tol == 0:
                eq_rows.append(row)
                eq_rhs.append(target)
            else:
                ub_rows.append(row)
                ub_rhs.append(target + tol)
                ub_rows.append([-v for v in row])
                ub_rhs.append(tol - target)
    for z in range(nz):
        row = [F(0)] * nvar
        for y in range(ny):
            row[var(z, y)] = F(1)
        eq_rows.append(row)
        eq_rhs.append(F(1))
    nslack = len(ub_rows)
    A = [r + [F(0)] * nslack for r in eq_rows]
    for k, r in enumerate(ub_rows):
        A.append(r + [F(int(i == k)) for i in range(nslack)])
    return _phase_one(A, eq_rhs + ub_rhs)
