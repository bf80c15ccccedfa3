import numpy as np
import pytest

from qsep import states, tripartite
from qsep.states import SimplexPoint
from qsep.verdict import HOLDS, MARGINAL, VIOLATED, signs_agree


def simplex_grid(n=15):
    return [
        SimplexPoint(i / n, j / n)
        for i in range(n + 1)
        for j in range(n + 1 - i)
    ]


class TestSpinObservables:
    def test_rejects_non_triad(self):
        bad = (tripartite.PAULI_X, tripartite.PAULI_X, tripartite.PAULI_Z)
        with pytest.raises(ValueError, match="anticommute"):
            tripartite.build_spin_observables(bad, bad, bad)

    def test_setting_one_reduces_to_matrix_elements(self):
        # <X_0>^2 + <Y_0>^2 = 4 |rho_07|^2 for Setting I
        p = SimplexPoint(0.35, 0.2)
        rho = states.build_rho(p)
        obs = tripartite.build_spin_observables(*(tripartite.SETTING_I,) * 3)
        x0 = float(np.trace(obs["X"][0] @ rho).real)
        y0 = float(np.trace(obs["Y"][0] @ rho).real)
        assert abs(x0**2 + y0**2 - 4.0 * abs(rho[0, 7]) ** 2) < 1e-12
        # <I_0>^2 - <Z_0>^2 = 4 rho_00 rho_77 on permutation-invariant states
        i0 = float(np.trace(obs["I"][0] @ rho).real)
        z0 = float(np.trace(obs["Z"][0] @ rho).real)
        assert abs((i0**2 - z0**2) - 4.0 * rho[0, 0].real * rho[7, 7].real) < 1e-12

    def test_permutation_invariant_expectations_equal_for_x123(self):
        p = SimplexPoint(0.3, 0.4)
        rho = states.build_rho(p)
        obs = tripartite.build_spin_observables(*(tripartite.SETTING_I,) * 3)
        for key in ("X", "Y", "Z", "I"):
            sq = [float(np.trace(obs[key][x] @ rho).real) ** 2 for x in range(4)]
            assert abs(sq[1] - sq[2]) < 1e-12 and abs(sq[2] - sq[3]) < 1e-12

    def test_triad_swap_invariance(self):
        # (X,Y,Z) -> (Y,X,Z) and (X,-Y,Z) leave the criterion values unchanged
        sx, sy, sz = tripartite.SETTING_I
        variants = ((sy, sx, sz), (sx, -sy, sz))
        for p in (SimplexPoint(0.5, 0.1), SimplexPoint(0.1, 0.6)):
            for level in tripartite.LEVELS:
                base = tripartite.criterion_su(p, (tripartite.SETTING_I,) * 3, level).margin
                for variant in variants:
                    other = tripartite.criterion_su(p, (variant,) * 3, level).margin
                    assert abs(base - other) < 1e-10

    def test_hadamard_conjugate_of_setting1_equals_setting2(self):
        # H sigma_i H = (sigma_z, -sigma_y, sigma_x); equivalent to Setting II
        sx, sy, sz = tripartite.SETTING_I
        conjugated = (sz, -sy, sx)
        for p in (SimplexPoint(0.4, 0.3), SimplexPoint(0.05, 0.7)):
            for level in tripartite.LEVELS:
                a = tripartite.criterion_su(p, (conjugated,) * 3, level).margin
                b = tripartite.criterion_su(p, (tripartite.SETTING_II,) * 3, level).margin
                assert abs(a - b) < 1e-10


class TestCriterionSU:
    def test_setting1_2sep_pure_ghz_violated(self):
        v = tripartite.criterion_su(SimplexPoint(1.0, 0.0), (tripartite.SETTING_I,) * 3, "2sep")
        assert v.holds == VIOLATED

    def test_setting2_2sep_g0_boundary(self):
        just_below = tripartite.criterion_su(
            SimplexPoint(0.0, 0.6 - 1e-6), (tripartite.SETTING_II,) * 3, "2sep"
        )
        just_above = tripartite.criterion_su(
            SimplexPoint(0.0, 0.6 + 1e-6), (tripartite.SETTING_II,) * 3, "2sep"
        )
        assert just_below.margin > 0 > just_above.margin

    def test_setting2_28cap3_g0_boundary_at_3_over_11(self):
        w0 = 3.0 / 11.0
        below = tripartite.criterion_su(
            SimplexPoint(0.0, w0 - 1e-6), (tripartite.SETTING_II,) * 3, "28cap3"
        )
        above = tripartite.criterion_su(
            SimplexPoint(0.0, w0 + 1e-6), (tripartite.SETTING_II,) * 3, "28cap3"
        )
        assert below.margin > 0 > above.margin

    def test_closed_forms_agree_in_sign_everywhere(self):
        for p in simplex_grid(12):
            for idx, setting in enumerate(tripartite.PUBLISHED_SETTINGS):
                for level in tripartite.LEVELS:
                    v = tripartite.criterion_su(p, (setting,) * 3, level)
                    closed = float(tripartite.su_closed_margin(p.g, p.w, idx, level))
                    assert signs_agree(v.margin, closed), (p, idx, level)

    def test_setting3_never_stronger_than_setting2_for_2sep(self):
        for p in simplex_grid(12):
            v2 = tripartite.criterion_su(p, (tripartite.SETTING_II,) * 3, "2sep")
            v3 = tripartite.criterion_su(p, (tripartite.SETTING_III,) * 3, "2sep")
            if v2.holds == HOLDS:
                assert v3.holds != VIOLATED, p

    def test_setting3_283_identical_to_setting2(self):
        for p in simplex_grid(10):
            v2 = tripartite.criterion_su(p, (tripartite.SETTING_II,) * 3, "28cap3")
            v3 = tripartite.criterion_su(p, (tripartite.SETTING_III,) * 3, "28cap3")
            assert v2.holds == v3.holds, p

    def test_violation_hierarchy(self):
        # violated(2sep) implies violated(28cap3) implies violated(3sep)
        for p in simplex_grid(10):
            for setting in tripartite.PUBLISHED_SETTINGS:
                m2 = tripartite.criterion_su(p, (setting,) * 3, "2sep").margin
                m283 = tripartite.criterion_su(p, (setting,) * 3, "28cap3").margin
                m3 = tripartite.criterion_su(p, (setting,) * 3, "3sep").margin
                assert m3 <= m283 + 1e-12
                if m2 < -1e-9:
                    assert m283 < 1e-9, p


class TestPermutation222:
    def test_white_noise_holds(self):
        v = tripartite.criterion_permutation_222(SimplexPoint(0.0, 0.0))
        assert v.holds == HOLDS and abs(v.margin - 0.5) < 1e-12

    def test_pure_ghz_violated(self):
        v = tripartite.criterion_permutation_222(SimplexPoint(1.0, 0.0))
        assert v.holds == VIOLATED and abs(v.margin + 1.0) < 1e-12

    def test_w0_boundary_not_inside_ppt_segment(self):
        # the criterion must not cut into the fully separable 0 <= g <= 1/5 segment
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = (lo + hi) / 2
            margin = tripartite.criterion_permutation_222(SimplexPoint(mid, 0.0)).margin
            if margin > 0:
                lo = mid
            else:
                hi = mid
        assert lo >= 0.2 - 1e-9


class TestHuber:
    def test_phi_vectors_are_products(self):
        tripartite._require_product_vector(tripartite.phi_ghz())
        tripartite._require_product_vector(tripartite.phi_w())

    def test_rejects_entangled_detection_vector(self):
        bad = np.zeros(64, dtype=complex)
        bad[0] = bad[63] = 1 / np.sqrt(2)
        with pytest.raises(ValueError, match="product"):
            tripartite.criterion_huber(SimplexPoint(0.0, 0.0), bad, 2)

    def test_white_noise_holds_both_k(self):
        for k in (2, 3):
            for phi in (tripartite.phi_ghz(), tripartite.phi_w()):
                v = tripartite.criterion_huber(SimplexPoint(0.0, 0.0), phi, k)
                assert v.holds == HOLDS

    def test_phi_ghz_matches_setting1_margins_exactly(self):
        # same matrix-element content: margins should match to rounding
        for p in (SimplexPoint(0.4, 0.1), SimplexPoint(0.7, 0.2), SimplexPoint(0.1, 0.1)):
            hub = tripartite.criterion_huber(p, tripartite.phi_ghz(), 2)
            rho = states.build_rho(p)
            d = rho.real.diagonal()
            expected = (
                np.sqrt(d[3] * d[4]) + np.sqrt(d[2] * d[5]) + np.sqrt(d[1] * d[6])
                - abs(rho[0, 7])
            )
            assert abs(hub.margin - expected) < 1e-12, p

    def test_phi_ghz_k3_matches_setting1_28cap3_verdict(self):
        for p in simplex_grid(10):
            hub = tripartite.criterion_huber(p, tripartite.phi_ghz(), 3)
            su = tripartite.criterion_su(p, (tripartite.SETTING_I,) * 3, "28cap3")
            if hub.holds != su.holds:
                assert MARGINAL in (hub.holds, su.holds), p

    def test_phi_w_matches_setting2_verdicts(self):
        for p in simplex_grid(10):
            hub2 = tripartite.criterion_huber(p, tripartite.phi_w(), 2)
            su2 = tripartite.criterion_su(p, (tripartite.SETTING_II,) * 3, "2sep")
            if hub2.holds != su2.holds:
                assert MARGINAL in (hub2.holds, su2.holds), p
            hub3 = tripartite.criterion_huber(p, tripartite.phi_w(), 3)
            su3 = tripartite.criterion_su(p, (tripartite.SETTING_II,) * 3, "28cap3")
            if hub3.holds != su3.holds:
                assert MARGINAL in (hub3.holds, su3.holds), p


class TestGS:
    def test_gs2_white_noise_holds(self):
        v = tripartite.criterion_gs_biseparable(SimplexPoint(0.0, 0.0))
        assert v.holds == HOLDS

    def test_gs2_boundaries(self):
        # w axis bound 9/17 for the W-flavoured form, g axis bound 3/7 for the GHZ one
        eps = 1e-7
        below = tripartite.criterion_gs_biseparable(SimplexPoint(0.0, 9 / 17 - eps))
        above = tripartite.criterion_gs_biseparable(SimplexPoint(0.0, 9 / 17 + eps))
        assert below.parts["gs2_w"] > 0 > above.parts["gs2_w"]
        below = tripartite.criterion_gs_biseparable(SimplexPoint(3 / 7 - eps, 0.0))
        above = tripartite.criterion_gs_biseparable(SimplexPoint(3 / 7 + eps, 0.0))
        assert below.parts["gs2_ghz"] > 0 > above.parts["gs2_ghz"]

    def test_gs3_white_noise_all_margins_positive(self):
        v = tripartite.criterion_gs_fullsep(SimplexPoint(0.0, 0.0))
        assert v.holds == HOLDS
        assert all(m > 0 for m in v.parts.values())

    def test_gs3_pure_ghz_violated(self):
        v = tripartite.criterion_gs_fullsep(SimplexPoint(1.0, 0.0))
        assert v.holds == VIOLATED

    def test_gs3_11_violated_at_pptes_point(self):
        v = tripartite.criterion_gs_fullsep(SimplexPoint(0.2, 0.2))
        member = v.parts["gs3_four_0356"]
        expected = (0.175 * 0.075**3) ** 0.25 - 0.1
        assert abs(member - expected) < 1e-12
        assert member < 0
        assert v.holds == VIOLATED

    def test_generator_counts_and_dedup(self):
        sixth, fourth = tripartite.gs3_generate_families()
        assert len(sixth) == 28
        assert len(fourth) == 12
        six_sigs, four_sigs = tripartite.gs3_deduplicated_signatures()
        assert six_sigs == {tripartite._class_signature(ms) for ms in tripartite.GS3_SIXTH}
        assert four_sigs == {tripartite._class_signature(ms) for ms in tripartite.GS3_FOURTH}
        assert len(six_sigs) == 8 and len(four_sigs) == 5


class TestWitnesses:
    def test_closed_forms(self):
        for p in simplex_grid(10):
            values = tripartite.witness_expectations(p)
            closed = tripartite.witness_closed_forms(p.g, p.w)
            for name in values:
                assert abs(values[name] - float(closed[name])) < 1e-12

    def test_pure_ghz_detected(self):
        values = tripartite.witness_expectations(SimplexPoint(1.0, 0.0))
        assert abs(values["w_ghz"] + 0.25) < 1e-14

    def test_pure_w_detected(self):
        values = tripartite.witness_expectations(SimplexPoint(0.0, 1.0))
        assert abs(values["w_w1"] + 1.0 / 3.0) < 1e-14

    def test_white_noise_all_positive(self):
        values = tripartite.witness_expectations(SimplexPoint(0.0, 0.0))
        assert all(v > 0 for v in values.values())


class TestGhzClassBounds:
    def test_pure_ghz(self):
        assert tripartite.ghz_class_bounds(SimplexPoint(1.0, 0.0)) == tripartite.DEFINITELY_GHZ

    def test_pure_w(self):
        assert tripartite.ghz_class_bounds(SimplexPoint(0.0, 1.0)) == tripartite.NOT_GHZ

    def test_white_noise(self):
        assert tripartite.ghz_class_bounds(SimplexPoint(0.0, 0.0)) == tripartite.NOT_GHZ

    def test_vertex_straddling(self):
        eps = 5e-4
        g0 = tripartite.G0
        assert abs(g0 - 0.626851) < 1e-6
        inside = SimplexPoint(g0 + eps, 1.0 - g0 - eps)
        outside = SimplexPoint(g0 - eps, 1.0 - g0 + eps)
        assert tripartite.ghz_class_bounds(inside) == tripartite.UNDETERMINED
        assert tripartite.ghz_class_bounds(outside) == tripartite.NOT_GHZ


class TestRandomSettingSearch:
    def test_deterministic_under_seed(self):
        p = SimplexPoint(0.5, 0.2)
        r1 = tripartite.random_setting_search(p, 20, seed=5)
        r2 = tripartite.random_setting_search(p, 20, seed=5)
        assert r1.verdict.margin == r2.verdict.margin

    def test_white_noise_all_hold(self):
        r = tripartite.random_setting_search(SimplexPoint(0.0, 0.0), 30, seed=3)
        assert r.verdict.margin > 0
        assert not r.beats_reference

    def test_no_sample_beats_setting1_at_pure_ghz(self):
        r = tripartite.random_setting_search(SimplexPoint(1.0, 0.0), 100, seed=11)
        assert not r.beats_reference
        assert r.reference_margin is not None

    def test_rejects_zero_samples(self):
        with pytest.raises(ValueError):
            tripartite.random_setting_search(SimplexPoint(0.1, 0.1), 0, seed=1)
