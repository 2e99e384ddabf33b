"""Moment-map verification: axioms, fusion, doubles, exponentials."""

import numpy as np
import pytest

from purespin.geometry import (
    conjugacy_volume_top,
    ghjw_matrix,
    random_class_point,
    su2_class_from_trace,
)
from purespin.groups import swap_double_model
from purespin.moment import (
    DoubleFactory,
    FusionData,
    QHamPoint,
    conjugacy_qham_point,
    exp_dirac_report,
    exp_orbit_qham_point,
    fuse,
    fused_three_form_residual,
    fusion_tau,
    homotopy_two_form,
    infinitesimal_invariance_residual,
    kirillov_poisson_matrix,
    minimal_degeneracy,
    moment_condition_residual,
    mult_eta_identity_residual,
    qham_volume_top,
    regular_value_report,
    strong_dirac_equivalence,
    symmetric_space_record,
    tau_matrix,
)


@pytest.fixture(scope="module")
def factory(su2):
    return DoubleFactory(su2)


class TestMomentCondition:
    def test_classes_satisfy_it(self, su2, rng):
        for tr in (0.0, 0.5, -1.2):
            pt = random_class_point(su2, su2_class_from_trace(tr), rng)
            p = conjugacy_qham_point(su2, pt.g)
            assert moment_condition_residual(p) < 1e-10

    def test_single_point_space(self, su2):
        p = QHamPoint(su2, np.zeros((0, 0)), su2.identity(), np.zeros((0, 3)), np.zeros((0, 3)))
        assert moment_condition_residual(p) == 0.0
        assert minimal_degeneracy(p)["original"]

    def test_detector_sensitivity(self, su2, rng):
        pt = random_class_point(su2, su2_class_from_trace(0.9), rng)
        p = conjugacy_qham_point(su2, pt.g)
        noise = 1e-3 * np.array([[0.0, 1.0], [-1.0, 0.0]])
        noisy = QHamPoint(su2, p.omega + noise, p.phi, p.dphi, p.action)
        res = moment_condition_residual(noisy)
        assert 1e-4 < res < 1e-2


class TestMinimalDegeneracy:
    def test_generic_class(self, su2, rng):
        p = conjugacy_qham_point(su2, random_class_point(su2, su2_class_from_trace(0.8), rng).g)
        md = minimal_degeneracy(p)
        assert md["original"] and md["elegant"] and md["consistent"]
        assert md["kernel_dim"] == 0

    def test_zero_trace_class_full_kernel(self, su2, rng):
        p = conjugacy_qham_point(su2, random_class_point(su2, su2_class_from_trace(0.0), rng).g)
        md = minimal_degeneracy(p)
        assert md["kernel_dim"] == 2
        assert md["original"] and md["elegant"] and md["consistent"]

    def test_broken_kernel_detected(self, su2, rng):
        # a degenerate 2-form whose kernel does not come from flipped directions
        pt = random_class_point(su2, su2_class_from_trace(0.8), rng)
        p = conjugacy_qham_point(su2, pt.g)
        md = minimal_degeneracy(QHamPoint(su2, np.zeros_like(p.omega), p.phi, p.dphi, p.action))
        assert not md["original"]


class TestEquivalence:
    def test_valid_points_agree_positively(self, su2, factory, rng):
        for _ in range(10):
            if rng.integers(2):
                p = conjugacy_qham_point(
                    su2, random_class_point(su2, su2_class_from_trace(float(rng.uniform(-1.5, 1.5))), rng).g)
            else:
                p = factory.fused_double_point(su2.random_element(rng), su2.random_element(rng))
            rep = strong_dirac_equivalence(p)
            assert rep["axioms"] and rep["dirac"] and rep["agree"]

    def test_perturbed_points_agree_negatively(self, su2, rng):
        for _ in range(10):
            p = conjugacy_qham_point(
                su2, random_class_point(su2, su2_class_from_trace(0.6), rng).g)
            noise = 1e-3 * rng.standard_normal((2, 2))
            noisy = QHamPoint(su2, p.omega + (noise - noise.T), p.phi, p.dphi, p.action)
            rep = strong_dirac_equivalence(noisy)
            assert not rep["axioms"] and not rep["dirac"] and rep["agree"]

    def test_perturbed_moment_differential_detected(self, su2, rng):
        p = conjugacy_qham_point(
            su2, random_class_point(su2, su2_class_from_trace(0.6), rng).g)
        noisy = QHamPoint(su2, p.omega, p.phi,
                          p.dphi + 1e-3 * rng.standard_normal(p.dphi.shape), p.action)
        rep = strong_dirac_equivalence(noisy)
        assert not rep["axioms"] and not rep["dirac"] and rep["agree"]


class TestFusion:
    def test_tau_at_identity_pair(self, su2, rng):
        xi1, xi2 = su2.random_algebra(rng), su2.random_algebra(rng)
        ze1, ze2 = su2.random_algebra(rng), su2.random_algebra(rng)
        val = fusion_tau(su2, su2.identity(), su2.identity(),
                         np.concatenate([xi1, xi2]), np.concatenate([ze1, ze2]))
        expect = 0.5 * (su2.pairing(xi1, ze2) - su2.pairing(ze1, xi2))
        assert abs(val - expect) < 1e-12

    def test_tau_antisymmetric(self, su2, rng):
        g1, g2 = su2.random_element(rng), su2.random_element(rng)
        t = tau_matrix(su2, g2)
        assert np.linalg.norm(t + t.T) < 1e-12

    def test_fusing_with_trivial_factor_changes_nothing(self, su2, rng):
        pt = random_class_point(su2, su2_class_from_trace(0.4), rng)
        p = conjugacy_qham_point(su2, pt.g)
        m = p.frame_dim
        data = FusionData(su2, p.omega, p.phi, su2.identity(),
                          p.dphi, np.zeros((m, 3)), p.action, np.zeros((m, 3)))
        fused = fuse(data)
        assert np.linalg.norm(fused.omega - p.omega) < 1e-12
        assert np.linalg.norm(fused.phi - p.phi) < 1e-12
        assert np.linalg.norm(fused.dphi - p.dphi) < 1e-12

    def test_mult_eta_identity(self, su2, factory, rng):
        for _ in range(3):
            a, b = su2.random_element(rng), su2.random_element(rng)
            assert mult_eta_identity_residual(su2, factory.product, a, b) < 1e-4

    def test_abelian_identity_trivial(self, torus3):
        from purespin.groups import product_model
        prod = product_model(torus3, torus3)
        a = torus3.exp([0.2, 0.1, 0.0])
        b = torus3.exp([-0.3, 0.0, 0.5])
        assert mult_eta_identity_residual(torus3, prod, a, b) < 1e-10


class TestDoubles:
    def test_symmetric_record_axioms(self, su2, rng):
        wr = swap_double_model(su2)
        rec = symmetric_space_record(wr, su2.random_element(rng))
        assert moment_condition_residual(rec) < 1e-12
        md = minimal_degeneracy(rec)
        assert md["original"] and md["elegant"]

    def test_symmetric_record_moment_squares_central(self, su2, rng):
        wr = swap_double_model(su2)
        rec = symmetric_space_record(wr, su2.random_element(rng))
        sq = rec.phi @ rec.phi
        assert np.linalg.norm(sq - np.eye(4)) < 1e-12

    def test_double_moment_components(self, su2, factory, rng):
        a, b = su2.random_element(rng), su2.random_element(rng)
        p = factory.double_point(a, b)
        mat = np.asarray(p.phi)
        assert np.linalg.norm(mat[:2, :2] - a @ b) < 1e-12
        assert np.linalg.norm(mat[2:, 2:] - np.linalg.inv(a) @ np.linalg.inv(b)) < 1e-12

    def test_double_axioms(self, su2, factory, rng):
        for _ in range(5):
            p = factory.double_point(su2.random_element(rng), su2.random_element(rng))
            assert moment_condition_residual(p) < 1e-10
            md = minimal_degeneracy(p)
            assert md["original"] and md["elegant"] and md["consistent"]

    def test_fused_double_moment_is_commutator(self, su2, factory, rng):
        a, b = su2.random_element(rng), su2.random_element(rng)
        p = factory.fused_double_point(a, b)
        comm = a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)
        assert np.linalg.norm(p.phi - comm) < 1e-12

    def test_fused_double_axioms(self, su2, factory, rng):
        for _ in range(10):
            p = factory.fused_double_point(su2.random_element(rng), su2.random_element(rng))
            assert moment_condition_residual(p) < 1e-8
            md = minimal_degeneracy(p)
            assert md["original"] and md["elegant"] and md["consistent"]

    def test_fused_three_form_identity(self, su2, factory, rng):
        a, b = su2.random_element(rng), su2.random_element(rng)
        assert fused_three_form_residual(factory, a, b) < 1e-4

    def test_fused_double_at_degenerate_parameters(self, su2, factory, rng):
        # identity pair, commuting pair, central argument: the moment value has
        # no flipped directions there, so the 2-form must be nondegenerate
        cases = [
            (su2.identity(), su2.identity()),
            (su2.exp(np.array([0.7, 0, 0])), su2.exp(np.array([1.1, 0, 0]))),
            (-su2.identity(), su2.random_element(rng)),
        ]
        for a, b in cases:
            p = factory.fused_double_point(a, b)
            assert moment_condition_residual(p) < 1e-10
            md = minimal_degeneracy(p)
            assert md["kernel_dim"] == 0 and md["original"] and md["elegant"]


class TestFrameIndependence:
    def test_residuals_and_verdicts_stable(self, su2, factory, rng):
        p = factory.fused_double_point(su2.random_element(rng), su2.random_element(rng))
        s = rng.standard_normal((6, 6))
        while abs(np.linalg.det(s)) < 0.05:
            s = rng.standard_normal((6, 6))
        q = p.change_frame(s)
        assert moment_condition_residual(q) < 1e-6
        md_p, md_q = minimal_degeneracy(p), minimal_degeneracy(q)
        assert md_p["original"] == md_q["original"]
        assert md_p["kernel_dim"] == md_q["kernel_dim"]

    def test_density_transforms_by_determinant(self, su2, su2_pin, factory, rng):
        p = factory.fused_double_point(su2.random_element(rng), su2.random_element(rng))
        s = rng.standard_normal((6, 6))
        while abs(np.linalg.det(s)) < 0.05:
            s = rng.standard_normal((6, 6))
        d1 = qham_volume_top(p, su2_pin)
        d2 = qham_volume_top(p.change_frame(s), su2_pin)
        assert abs(d2 - d1 * np.linalg.det(s)) < 1e-8 * max(1.0, abs(d1 * np.linalg.det(s)))


class TestVolumes:
    def test_class_routes_agree(self, su2, su2_pin, rng):
        for tr in (0.0, 0.8):
            pt = random_class_point(su2, su2_class_from_trace(tr), rng)
            p = conjugacy_qham_point(su2, pt.g)
            direct = conjugacy_volume_top(pt, su2_pin)
            via_moment = qham_volume_top(
                QHamPoint(su2, ghjw_matrix(pt), pt.g, pt.frame.T, p.action), su2_pin)
            assert abs(direct - via_moment) < 1e-10

    def test_point_density_is_unit(self, su2, su2_pin):
        p = QHamPoint(su2, np.zeros((0, 0)), su2.identity(), np.zeros((0, 3)), np.zeros((0, 3)))
        assert abs(qham_volume_top(p, su2_pin)) == pytest.approx(1.0)

    def test_fused_double_density_nonzero(self, su2, su2_pin, factory, rng):
        for _ in range(10):
            p = factory.fused_double_point(su2.random_element(rng), su2.random_element(rng))
            assert abs(qham_volume_top(p, su2_pin)) > 1e-10


class TestInfinitesimalInvariance:
    def test_class_form_is_invariant(self, su2, rng):
        g0 = random_class_point(su2, su2_class_from_trace(0.7), rng).g
        base = conjugacy_qham_point(su2, g0)
        xi = su2.random_algebra(rng)

        def builder(h):
            # transport the carrier point and rebuild with the transported frame
            moved = h @ g0 @ np.linalg.inv(h)
            from purespin.geometry import ConjugacyClassPoint
            from purespin.geometry import ghjw_matrix as gm
            frame = su2.Ad(h) @ base.dphi.T
            params = np.linalg.lstsq(
                su2.Ad(np.linalg.inv(moved)) - np.eye(3), frame, rcond=None)[0]
            pt = ConjugacyClassPoint(su2, moved, frame, params)
            return QHamPoint(su2, gm(pt), moved, frame.T, np.zeros((2, 3)))

        assert infinitesimal_invariance_residual(builder, base, xi) < 1e-6


class TestRegularValue:
    def test_commuting_pair_maps_to_identity(self, su2, factory, rng):
        # commuting arguments put the fused-double moment at the identity
        x = su2.random_algebra(rng)
        a, b = su2.exp(x), su2.exp(0.6 * x)
        p = factory.fused_double_point(a, b)
        rep = regular_value_report(p)
        assert rep["moment_is_identity"]
        assert rep["dphi_rank"] + rep["dphi_kernel_dim"] == p.frame_dim

    def test_generic_pair_not_at_identity(self, su2, factory, rng):
        p = factory.fused_double_point(su2.random_element(rng), su2.random_element(rng))
        rep = regular_value_report(p)
        assert not rep["moment_is_identity"]
        assert rep["dphi_rank"] == 3 and rep["omega_kernel_dim"] == 0


class TestExponential:
    def test_kirillov_matrix_antisymmetric(self, su2, rng):
        p = kirillov_poisson_matrix(su2, su2.random_algebra(rng))
        assert np.linalg.norm(p + p.T) < 1e-12

    def test_homotopy_form_vanishes_at_origin(self, su2):
        assert np.linalg.norm(homotopy_two_form(su2, np.zeros(3))) < 1e-12

    def test_origin_conditions_exact(self, su2):
        rep = exp_dirac_report(su2, 1e-8 * np.ones(3))
        assert rep["exterior_residual"] < 1e-6
        assert rep["dirac_distance"] < 1e-8 and rep["strong"]

    def test_abelian_trivial(self, torus3):
        rep = exp_dirac_report(torus3, np.array([0.4, -0.2, 0.1]))
        assert rep["exterior_residual"] < 1e-10
        assert rep["dirac_distance"] < 1e-10 and rep["strong"]

    def test_random_points(self, su2, rng):
        for _ in range(5):
            rep = exp_dirac_report(su2, su2.random_algebra(rng, 0.8))
            assert rep["exterior_residual"] < 1e-5
            assert rep["dirac_distance"] < 1e-8 and rep["strong"]

    def test_outside_natural_domain_rejected(self, su2):
        xi = np.array([2 * np.pi, 0.0, 0.0])  # first singular radius of exp
        with pytest.raises(ValueError):
            exp_dirac_report(su2, xi)

    def test_exp_orbit_point_is_q_hamiltonian(self, su2, rng):
        for _ in range(5):
            p = exp_orbit_qham_point(su2, su2.random_algebra(rng, 0.9))
            assert moment_condition_residual(p) < 1e-8
            md = minimal_degeneracy(p)
            assert md["original"] and md["elegant"]
            assert strong_dirac_equivalence(p)["agree"]
