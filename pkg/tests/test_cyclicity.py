import math

import numpy as np
import pytest

from dirichlet_ball.cyclicity import (
    BOUNDED,
    GROWING,
    INCONCLUSIVE,
    aitken_limit,
    approximant_sweep,
    boundedness_verdict,
    dilation_norm,
    dilation_quotient_norm,
    dilation_sweep,
    gram_matrix,
    optimal_approximant,
    shift,
)
from dirichlet_ball.errors import DegenerateDenominator, InvalidInput
from dirichlet_ball.norms import SpaceParams, check_norm_equivalence, norm_sq, weight
from dirichlet_ball.parser import parse
from dirichlet_ball.sampling import mc_ball_chunks
from dirichlet_ball.series import enumerate_multiindices, evaluate, multiply


def gram_schmidt_distance(f, N, params):
    """Project 1 onto span{z^j f} by explicit modified Gram-Schmidt on weighted coefficient vectors."""
    n = params.n
    D = N + f.polynomial_degree
    index = {k: i for i, k in enumerate(enumerate_multiindices(n, D))}
    sw = np.array([math.sqrt(weight(params, k)) for k in index])

    def vec(g):
        v = np.zeros(len(index), dtype=complex)
        for k, a in g.items():
            v[index[k]] = a
        return v * sw

    ortho = []
    for j in enumerate_multiindices(n, N):
        v = vec(shift(f, j))
        for e in ortho:
            v = v - np.vdot(e, v) * e
        nv = np.linalg.norm(v)
        if nv > 1e-10:
            ortho.append(v / nv)
    one = np.zeros(len(index), dtype=complex)
    one[0] = sw[0]
    proj = sum(np.vdot(e, one) * e for e in ortho)
    return float(np.linalg.norm(one - proj) ** 2), proj / sw, index


class TestGram:
    def test_disk_example(self):
        sys_ = gram_matrix(parse("1 - z1", 1), 1, SpaceParams(1, 0))
        assert np.allclose(sys_.matrix, [[2, -1], [-1, 2]], atol=1e-15)
        assert np.allclose(sys_.rhs, [1, 0], atol=1e-15)

    @pytest.mark.parametrize("alpha", [-1.0, 0.0, 2.5])
    def test_constant(self, alpha):
        p = SpaceParams(2, alpha)
        sys_ = gram_matrix(parse("1", 2), 0, p)
        assert sys_.matrix[0, 0] == pytest.approx(2**alpha)
        assert sys_.rhs[0] == pytest.approx(2**alpha)

    def test_rhs_vanishes_when_f0_is_zero(self):
        sys_ = gram_matrix(parse("z1", 2), 0, SpaceParams(2, 0))
        assert sys_.matrix[0, 0] == pytest.approx(0.5)
        assert sys_.rhs[0] == 0

    def test_hermitian(self):
        f = parse("1 - 2*z1*z2 + (0.3 - 0.2*i)*z2 + i*z1^2", 2)
        for alpha in (-1.0, 1.0, 2.5):
            assert gram_matrix(f, 6, SpaceParams(2, alpha)).hermiticity_defect() <= 1e-14

    def test_zero_function(self):
        with pytest.raises(InvalidInput):
            gram_matrix(parse("0", 2), 2, SpaceParams(2, 0))


class TestApproximant:
    def test_constant_term_only(self):
        res = optimal_approximant(parse("1 - z1", 1), 0, SpaceParams(1, 0))
        assert res.coefficients[(0,)] == pytest.approx(0.5)
        assert res.dist_sq == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("N", range(11))
    def test_disk_hardy_pattern(self, N):
        assert optimal_approximant(parse("1 - z1", 1), N, SpaceParams(1, 0)).dist_sq == pytest.approx(
            1 / (N + 2), abs=1e-12
        )

    def test_invertible_constant(self):
        res = optimal_approximant(parse("1", 2), 3, SpaceParams(2, 1.7))
        assert res.coefficients[(0, 0)] == pytest.approx(1)
        assert res.dist_sq == pytest.approx(0, abs=1e-14)

    @pytest.mark.parametrize("N", range(7))
    def test_slice_matches_disk(self, N):
        # H^2(B_2) weights on the z1 axis are 1/(k+1): the Bergman space of the disk
        res = optimal_approximant(parse("1 - z1", 2), N, SpaceParams(2, 0))
        disk = optimal_approximant(parse("1 - z1", 1), N, SpaceParams(1, -1))
        oracle, _, _ = gram_schmidt_distance(parse("1 - z1", 1), N, SpaceParams(1, -1))
        assert res.dist_sq == pytest.approx(disk.dist_sq, abs=1e-12)
        assert res.dist_sq == pytest.approx(oracle, abs=1e-12)

    def test_slice_first_value(self):
        # min over p of (p-1)^2 + p^2/2 is 1/3 at p = 2/3
        res = optimal_approximant(parse("1 - z1", 2), 0, SpaceParams(2, 0))
        assert res.dist_sq == pytest.approx(1 / 3, abs=1e-15)
        assert res.coefficients[(0, 0)] == pytest.approx(2 / 3)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5])
    def test_residual_agreement(self, alpha):
        res = optimal_approximant(parse("1 - 2*z1*z2 + 0.5*z2", 2), 5, SpaceParams(2, alpha))
        assert abs(res.dist_sq - res.residual_norm_check) <= 1e-8 * (1 + res.dist_sq)

    @pytest.mark.parametrize("f", ["1 - 2*z1*z2", "1 - z1 + 0.4*i*z2^2", "2 + z1 - z2"])
    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    @pytest.mark.parametrize("N", range(5))
    def test_gram_schmidt_oracle(self, f, alpha, N):
        f = parse(f, 2)
        params = SpaceParams(2, alpha)
        res = optimal_approximant(f, N, params)
        d_gs, proj, index = gram_schmidt_distance(f, N, params)
        assert res.dist_sq == pytest.approx(d_gs, abs=1e-8)
        pf = multiply(res.polynomial(2), f, N + f.polynomial_degree)
        for k, i in index.items():
            assert abs(pf[k] - proj[i]) <= 1e-8

    @pytest.mark.parametrize("lam", [3.0, -0.25, 2 - 5j, 1e-3j])
    def test_scale_invariance(self, lam):
        f = parse("1 - 2*z1*z2 + 0.5*z2", 2)
        p = SpaceParams(2, 1.5)
        for N in (0, 3, 6):
            a = optimal_approximant(f, N, p).dist_sq
            b = optimal_approximant(lam * f, N, p).dist_sq
            assert b == pytest.approx(a, rel=1e-10)

    def test_permutation_invariance(self):
        p = SpaceParams(3, 1.2)
        f = parse("1 - z1 + 0.5*z2^2 - 0.2*i*z3", 3)
        g = parse("1 - z3 + 0.5*z1^2 - 0.2*i*z2", 3)
        for N in range(4):
            assert optimal_approximant(f, N, p).dist_sq == pytest.approx(
                optimal_approximant(g, N, p).dist_sq, rel=1e-10
            )

    def test_symmetric_function_under_swap(self):
        p = SpaceParams(2, 2.0)
        f = parse("1 - 2*z1*z2 + 0.3*z1", 2)
        g = parse("1 - 2*z1*z2 + 0.3*z2", 2)
        for N in range(5):
            assert optimal_approximant(f, N, p).dist_sq == pytest.approx(
                optimal_approximant(g, N, p).dist_sq, rel=1e-10
            )


class TestSweep:
    def test_table_shape_and_monotonicity(self):
        sweep = approximant_sweep(parse("1 - 2*z1*z2", 2), 12, [1.0, 1.5, 2.0, 2.5], SpaceParams(2, 0))
        assert len(sweep.rows()) == 4 * 13
        assert all(sweep.nonincreasing.values())
        assert sweep.table[(1.0, 12)] < sweep.table[(2.5, 12)]

    def test_plateaus_from_block_structure(self):
        # only powers of z1*z2 couple to the constant, so odd degrees add nothing
        s = approximant_sweep(parse("1 - 2*z1*z2", 2), 6, [1.0], SpaceParams(2, 0)).series(1.0)
        for N in (0, 2, 4):
            assert s[N + 1] == pytest.approx(s[N], rel=1e-12)
            assert s[N + 2] < s[N + 1]

    def test_aitken_on_geometric_sequence(self):
        seq = [2 + 0.5**k for k in range(8)]
        assert aitken_limit(seq) == pytest.approx(2, abs=1e-12)
        assert aitken_limit([1, 1, 0.5, 0.5, 0.25 + 0.0, 0.25]) == pytest.approx(0.0, abs=1e-12)
        assert aitken_limit([3.0, 3.0]) == 3.0


class TestDilation:
    @pytest.mark.parametrize("alpha", [-1.0, 0.0, 2.0])
    def test_constant(self, alpha):
        for r in (0.5, 0.99):
            assert dilation_norm(parse("1", 2), r, SpaceParams(2, alpha)) == pytest.approx(2**alpha)

    def test_geometric_example(self):
        # f/f_r = 1 - sum_{k>=1} 0.5^k z1^k; w_0(k e1) = 1/(k+1) when n = 2
        x = 0.25
        expected = -math.log(1 - x) / x
        assert dilation_norm(parse("1 - z1", 2), 0.5, SpaceParams(2, 0)) == pytest.approx(expected, rel=1e-10)

    def test_disk_example(self):
        # n = 1: f/f_r - 1 = -(1-r) z/(1-rz), with H^2 norm (1-r)^2/(1-r^2)
        r = 0.5
        assert dilation_norm(parse("1 - z1", 1), r, SpaceParams(1, 0)) == pytest.approx(
            1 + (1 - r) ** 2 / (1 - r * r), rel=1e-10
        )

    def test_fixed_truncation_limit(self):
        f = parse("1 - 2*z1*z2", 2)
        p = SpaceParams(2, 1.5)
        assert dilation_norm(f, 1 - 1e-9, p, D=20) == pytest.approx(2**1.5, rel=1e-6)

    def test_degenerate(self):
        with pytest.raises(DegenerateDenominator):
            dilation_norm(parse("z1", 2), 0.5, SpaceParams(2, 0))
        with pytest.raises(InvalidInput):
            dilation_norm(parse("1 - z1", 2), 1.0, SpaceParams(2, 0))

    def test_warns_on_truncation_cap(self):
        with pytest.warns(RuntimeWarning):
            dilation_norm(parse("1 - z1", 2), 0.999, SpaceParams(2, 2.0), max_degree=50)

    def test_adaptive_matches_fixed(self):
        f = parse("1 - 2*z1*z2", 2)
        p = SpaceParams(2, 1.5)
        res = dilation_quotient_norm(f, 0.9, p)
        assert res.converged
        assert dilation_norm(f, 0.9, p, D=600) == pytest.approx(res.value, rel=1e-9)

    def test_bergman_cross_validation(self):
        # for alpha < 0 the norm is comparable to a weighted Bergman integral of |f/f_r|^2
        f = parse("1 - z1", 2)
        r = 0.9
        p = SpaceParams(2, -1.0)
        rep = check_norm_equivalence(p, 40)
        value = dilation_norm(f, r, p)
        s1 = s2 = 0.0
        count = 200_000
        for z in mc_ball_chunks(2, count, seed=11):
            v = np.abs(evaluate(f, z) / evaluate(f, r * z)) ** 2
            s1 += v.sum()
            s2 += (v * v).sum()
        mean = s1 / count
        se = math.sqrt((s2 / count - mean**2) / count)
        lo = rep.min_ratio * (mean - 4 * se)
        hi = rep.max_ratio * (mean + 4 * se)
        assert lo <= value <= hi


class TestDilationSweep:
    def test_verdict_rules(self):
        assert boundedness_verdict([1, 2, 2.9]) == BOUNDED
        assert boundedness_verdict([1, 5, 10]) == GROWING
        assert boundedness_verdict([1, 4, 9]) == INCONCLUSIVE
        assert boundedness_verdict([1, 1.5, 2], bounded_ratio=1.5, growing_ratio=2) == GROWING

    def test_constant_is_bounded(self):
        sweep = dilation_sweep(parse("1", 2), [0.9, 0.99, 0.999], [0.0, 3.0], SpaceParams(2, 0))
        assert set(sweep.verdicts.values()) == {BOUNDED}
        assert sweep.values(3.0) == pytest.approx([8, 8, 8])

    def test_circle_peak_function(self):
        sweep = dilation_sweep(parse("1 - 2*z1*z2", 2), [0.9, 0.99, 0.999], [1.5, 2.5], SpaceParams(2, 0))
        assert sweep.verdicts == {1.5: BOUNDED, 2.5: GROWING}
        assert all(row["converged"] for row in sweep.rows())
