import math

import numpy as np
import pytest

from qsep import bipartite, linalg, states
from qsep.states import SimplexPoint
from qsep.verdict import HOLDS, MARGINAL, VIOLATED


def simplex_grid(n=20):
    return [
        SimplexPoint(i / n, j / n)
        for i in range(n + 1)
        for j in range(n + 1 - i)
    ]


class TestMajorizes:
    def test_uniform_majorized_by_everything(self):
        rng = np.random.default_rng(0)
        uniform = np.full(8, 1 / 8)
        for _ in range(20):
            q = rng.dirichlet(np.ones(8))
            assert bipartite.majorizes(uniform, q)

    def test_incomparable_pair_from_the_text(self):
        p = [1 / 2, 1 / 8, 1 / 8, 1 / 8, 1 / 8]
        q = [1 / 3, 1 / 3, 1 / 3]
        assert not bipartite.majorizes(p, q)
        assert not bipartite.majorizes(q, p)

    def test_reflexive(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            p = rng.dirichlet(np.ones(6))
            assert bipartite.majorizes(p, p)

    def test_rejects_negative_entries(self):
        with pytest.raises(ValueError, match="negative"):
            bipartite.majorizes([1.1, -0.1], [0.5, 0.5])


class TestCriterionMajorization:
    def test_white_noise_both_hold(self):
        v1, v23 = bipartite.criterion_majorization(SimplexPoint(0.0, 0.0))
        assert v1.holds == HOLDS and v23.holds == HOLDS

    def test_pure_ghz_both_violated(self):
        v1, v23 = bipartite.criterion_majorization(SimplexPoint(1.0, 0.0))
        assert v1.holds == VIOLATED and v23.holds == VIOLATED

    def test_published_borderline_points_marginal(self):
        for g, w in ((2 / 13, 3 / 13), (1 / 5, 0.0)):
            _, v23 = bipartite.criterion_majorization(SimplexPoint(g, w))
            assert abs(v23.margin) <= 1e-10

    def test_rho23_implies_rho1_on_grid(self):
        for p in simplex_grid(15):
            v1, v23 = bipartite.criterion_majorization(p)
            if v23.holds == HOLDS:
                assert v1.holds != VIOLATED, p


class TestRenyiEntropy:
    def test_uniform_any_alpha(self):
        uniform = np.full(8, 1 / 8)
        for alpha in bipartite.ALPHA_GRID:
            assert abs(bipartite.renyi_entropy(uniform, alpha) - math.log(8)) < 1e-12

    def test_point_distribution(self):
        p = [1.0, 0.0, 0.0]
        for alpha in bipartite.ALPHA_GRID:
            assert abs(bipartite.renyi_entropy(p, alpha)) < 1e-12

    def test_hartley_counts_support(self):
        assert abs(bipartite.renyi_entropy([0.5, 0.5, 0.0], 0.0) - math.log(2)) < 1e-12

    def test_rejects_negative_alpha(self):
        with pytest.raises(ValueError):
            bipartite.renyi_entropy([1.0], -0.5)

    def test_schur_concavity_spot_check(self):
        rng = np.random.default_rng(2)
        checked = 0
        while checked < 25:
            p = rng.dirichlet(np.ones(8))
            q = rng.dirichlet(np.ones(8))
            if not bipartite.majorizes(p, q):
                continue
            checked += 1
            for alpha in (0.5, 1.0, 2.0, 5.0, math.inf):
                hp = bipartite.renyi_entropy(p, alpha)
                hq = bipartite.renyi_entropy(q, alpha)
                assert hp >= hq - 1e-10


class TestCriterionEntropy:
    def test_hartley_interior_holds(self):
        for p in (SimplexPoint(0.3, 0.3), SimplexPoint(0.9, 0.05)):
            v1, v23 = bipartite.criterion_entropy(p, 0.0)
            assert v1.holds == HOLDS and v23.holds == HOLDS

    def test_hartley_on_ghz_w_edge(self):
        # rk rho = 2 = rk rho^1 (equality, so not violated), rk rho^23 = 3
        v1, v23 = bipartite.criterion_entropy(SimplexPoint(0.5, 0.5), 0.0)
        assert v1.holds != VIOLATED
        assert v23.holds == VIOLATED

    def test_chebyshev_matches_table_columns(self):
        for p in simplex_grid(12):
            v1, v23 = bipartite.criterion_entropy(p, math.inf)
            c1, c23_i = bipartite.majorization_case_margins(p.g, p.w)
            # column (iii) is the max-eigenvalue inequality against rho^1
            spectra = states.closed_form_spectra(p)
            col_i = spectra["rho23"][0] - spectra["rho"][0]
            col_iii = spectra["rho1"][0] - spectra["rho"][0]
            for verdict, closed in ((v1, col_iii), (v23, col_i)):
                if verdict.holds == HOLDS:
                    assert closed > -1e-12
                elif verdict.holds == VIOLATED:
                    assert closed < 1e-12

    def test_never_stronger_than_majorization(self):
        for p in simplex_grid(12):
            v1m, v23m = bipartite.criterion_majorization(p)
            if v1m.holds == HOLDS and v23m.holds == HOLDS:
                for alpha in bipartite.ALPHA_GRID:
                    e1, e23 = bipartite.criterion_entropy(p, alpha)
                    assert e1.margin > -1e-9, (p, alpha)
                    assert e23.margin > -1e-9, (p, alpha)


class TestCriterionPPT:
    def test_white_noise(self):
        v = bipartite.criterion_ppt(SimplexPoint(0.0, 0.0))
        assert v.holds == HOLDS and abs(v.margin - 1 / 8) < 1e-12

    def test_pure_ghz(self):
        v = bipartite.criterion_ppt(SimplexPoint(1.0, 0.0))
        assert v.holds == VIOLATED and abs(v.margin + 0.5) < 1e-12

    def test_published_axis_boundary_marginal(self):
        v = bipartite.criterion_ppt(SimplexPoint(0.2, 0.0))
        assert v.holds == MARGINAL

    def test_pptes_point_holds(self):
        v = bipartite.criterion_ppt(SimplexPoint(0.2, 0.2))
        assert v.holds == HOLDS


class TestCriterionReduction:
    def test_matches_ppt_on_grid(self):
        for p in simplex_grid(15):
            assert bipartite.criterion_reduction(p).holds == bipartite.criterion_ppt(p).holds, p

    def test_pure_w_violated_via_linear_inequality(self):
        v = bipartite.criterion_reduction(SimplexPoint(0.0, 1.0))
        assert v.holds == VIOLATED
        assert abs(v.margin + math.sqrt(2) / 3) < 1e-12

    def test_white_noise_holds(self):
        assert bipartite.criterion_reduction(SimplexPoint(0.0, 0.0)).holds == HOLDS


class TestCriterionReshuffling:
    def test_white_noise(self):
        v = bipartite.criterion_reshuffling_24(SimplexPoint(0.0, 0.0))
        assert v.holds == HOLDS
        assert abs((1.0 - v.margin) - 1 / (2 * math.sqrt(2))) < 1e-12

    def test_pure_ghz(self):
        v = bipartite.criterion_reshuffling_24(SimplexPoint(1.0, 0.0))
        assert v.holds == VIOLATED
        assert abs((1.0 - v.margin) - 2.0) < 1e-12

    def test_pure_w(self):
        v = bipartite.criterion_reshuffling_24(SimplexPoint(0.0, 1.0))
        assert v.holds == VIOLATED
        assert abs((1.0 - v.margin) - (1.0 + 2.0 * math.sqrt(2) / 3.0)) < 1e-12

    def test_closed_forms_match_numeric_on_grid(self):
        for p in simplex_grid(12):
            numeric = linalg.singular_values(states.reshuffle_24(p))
            closed = bipartite.reshuffle24_closed_singular_values(p.g, p.w)
            assert np.max(np.abs(numeric - closed)) < 1e-10, p

    def test_alpha2_separable_template_below_one(self):
        # class 2.8 family members are separable under every bipartition
        for a in (0.5, 1.0, 2.0, 4.0):
            rho = states.example_states("class28", a=a)
            tn = linalg.trace_norm(states.reshuffle_24_matrix(rho))
            assert tn <= 1.0 + 1e-10, a
