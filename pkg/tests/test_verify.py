import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.optimize import linprog

from chanup import (
    Channel, GenSpec, IntermediateChannel, check_upgrade_witness, compose, feasibility_oracle,
    gen_random_channel, metrics_delta, ml_error_probability, symmetric_capacity,
    upgrade_reduce, validate_channel,
)
from chanup.errors import DimensionMismatch, InstanceTooLarge


def noiseless(p, exact=True):
    one, zero = (F(1), F(0)) if exact else (1.0, 0.0)
    return validate_channel([[one if i == j else zero for j in range(p)] for i in range(p)])


def posterior_witness(w):
    """Rows P(y|x) = W(y|x) for the noiseless channel."""
    return IntermediateChannel(tuple(tuple(r) for r in w.trans))


def scipy_feasible(w, q):
    a, b = w.as_array(), q.as_array()
    p, ny = a.shape
    nz = b.shape[1]
    A, rhs = [], []
    for x in range(p):
        for y in range(ny):
            row = np.zeros(nz * ny)
            row[[z * ny + y for z in range(nz)]] = b[x]
            A.append(row)
            rhs.append(a[x, y])
    for z in range(nz):
        row = np.zeros(nz * ny)
        row[z * ny:(z + 1) * ny] = 1
        A.append(row)
        rhs.append(1)
    res = linprog(np.zeros(nz * ny), A_eq=np.array(A), b_eq=rhs, bounds=(0, None), method="highs")
    return res.status == 0


class TestCompose:
    def test_identity(self):
        w = gen_random_channel(GenSpec(3, 4, seed=0, arith="rational"))
        assert compose(w, IntermediateChannel.identity(4, exact=True)) == w

    def test_noiseless_hand_product(self):
        w = validate_channel([[F(3, 4), F(1, 4)], [F(1, 3), F(2, 3)]])
        got = compose(noiseless(2), posterior_witness(w))
        assert got.trans == w.trans

    def test_float_product(self):
        q = validate_channel([[0.5, 0.5], [0.2, 0.8]])
        pw = IntermediateChannel(((0.1, 0.9), (0.6, 0.4)))
        assert np.allclose(compose(q, pw).as_array(), q.as_array() @ pw.as_array())

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            compose(noiseless(3), IntermediateChannel.identity(2))

    def test_chaining(self):
        w = gen_random_channel(GenSpec(3, 12, seed=1, arith="rational"))
        q1, p1, _ = upgrade_reduce(w)
        q2, p2, _ = upgrade_reduce(q1, __import__("chanup").ReductionConfig(explode_all=True))
        p21 = IntermediateChannel(tuple(
            tuple(sum(p2.matrix[z][m] * p1.matrix[m][y] for m in range(q1.q)) for y in range(w.q))
            for z in range(q2.q)))
        assert compose(compose(q2, p2), p1) == compose(q2, p21) == w


class TestCheck:
    def test_self(self):
        w = gen_random_channel(GenSpec(4, 6, seed=3))
        rep = check_upgrade_witness(w, w, IntermediateChannel.identity(6))
        assert rep.passed and rep.max_abs_residual == 0

    def test_pipeline(self):
        w = gen_random_channel(GenSpec(3, 20, seed=3))
        rep = check_upgrade_witness(w, *upgrade_reduce(w)[:2])
        assert rep.passed and rep.max_abs_residual <= 1e-9

    def test_perturbed_witness_fails(self):
        w = gen_random_channel(GenSpec(3, 20, seed=3))
        q, wit, _ = upgrade_reduce(w)
        m = [list(r) for r in wit.matrix]
        m[0][0] += 0.01
        rep = check_upgrade_witness(w, q, IntermediateChannel(tuple(map(tuple, m))))
        assert not rep.passed and rep.verdict == "fail"
        assert rep.max_abs_residual >= 0.01 * min(v for v in q.col(0).entries if v > 0)

    def test_negative_witness_entry_fails(self):
        w = validate_channel([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]])
        bad = IntermediateChannel(((F(3, 2), F(-1, 2)), (F(-1, 2), F(3, 2))))
        q = validate_channel([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]])
        rep = check_upgrade_witness(w, q, bad)
        assert rep.max_abs_residual == 0 and not rep.rows_ok and not rep.passed

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            check_upgrade_witness(noiseless(2), noiseless(3), IntermediateChannel.identity(3))


class TestMetricsDelta:
    def test_same(self):
        w = gen_random_channel(GenSpec(3, 5, seed=1))
        assert metrics_delta(w, w) == (0, 0)

    def test_noiseless(self):
        w = gen_random_channel(GenSpec(3, 5, seed=1, arith="rational"))
        dc, de = metrics_delta(w, noiseless(3))
        assert dc == pytest.approx(math.log2(3) - symmetric_capacity(w), abs=1e-15)
        assert de == -ml_error_probability(w)


class TestOracle:
    def test_self(self):
        w = gen_random_channel(GenSpec(3, 4, seed=2, arith="rational"))
        assert feasibility_oracle(w, w)

    def test_noiseless_upgrades_everything(self):
        w = gen_random_channel(GenSpec(3, 5, seed=2, arith="rational"))
        assert feasibility_oracle(w, noiseless(3))

    def test_bsc(self):
        b = lambda e: validate_channel([[1 - F(e), F(e)], [F(e), 1 - F(e)]])
        assert not feasibility_oracle(b("0.1"), b("0.2"))
        assert feasibility_oracle(b("0.2"), b("0.1"))

    def test_limits(self):
        with pytest.raises(InstanceTooLarge):
            feasibility_oracle(gen_random_channel(GenSpec(3, 7, seed=0)), noiseless(3))
        with pytest.raises(InstanceTooLarge):
            feasibility_oracle(noiseless(6), noiseless(6))

    def test_float_with_tolerance(self):
        w = gen_random_channel(GenSpec(3, 6, seed=5))
        q, _, _ = upgrade_reduce(w)
        assert feasibility_oracle(w, q, tol=1e-12)

    @pytest.mark.parametrize("seed", range(12))
    def test_agrees_with_scipy(self, seed):
        rng = np.random.default_rng(seed)
        p, ny, nz = 2 + seed % 2, 2 + seed % 3, 2 + (seed // 3) % 3
        w = gen_random_channel(GenSpec(p, ny, seed=seed, arith="rational"))
        if seed % 2:
            q = gen_random_channel(GenSpec(p, nz, seed=100 + seed, arith="rational"))
        else:
            frac = [list(map(lambda v: F(v).limit_denominator(50), r))
                    for r in rng.dirichlet(np.ones(ny), size=nz)]
            frac = [[v / sum(r) for v in r] for r in frac]
            # degrade the noiseless channel through a random map: always feasible
            q = validate_channel(tuple(tuple(r) for r in noiseless(p).trans))
            w = compose(q, IntermediateChannel(tuple(map(tuple, frac[:p]))))
        assert feasibility_oracle(w, q) == scipy_feasible(w, q)
