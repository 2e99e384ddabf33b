"""Group models: invariant forms, adjoint data, exponentials, extensions."""

import numpy as np
import pytest
import scipy.linalg

from purespin.groups import (
    get_model,
    product_model,
    so3_model,
    swap_double_model,
)


@pytest.fixture(scope="module", params=["su2", "so3", "su3", "coadjoint-semidirect"])
def model(request):
    return get_model(request.param)


class TestModelAxioms:
    def test_B_is_ad_invariant(self, model, rng):
        for _ in range(10):
            x, y, z = (model.random_algebra(rng) for _ in range(3))
            lhs = model.pairing(model.bracket(x, y), z)
            rhs = -model.pairing(y, model.bracket(x, z))
            assert abs(lhs - rhs) < 1e-12

    def test_B_nondegenerate(self, model):
        assert abs(np.linalg.det(model.B)) > 1e-9

    def test_Ad_is_homomorphism(self, model, rng):
        g, h = model.random_element(rng), model.random_element(rng)
        assert np.linalg.norm(model.Ad(model.mul(g, h)) - model.Ad(g) @ model.Ad(h)) < 1e-10

    def test_Ad_exp_is_exp_ad(self, model, rng):
        x = model.random_algebra(rng, 0.7)
        assert np.linalg.norm(model.Ad(model.exp(x)) - scipy.linalg.expm(model.ad(x))) < 1e-9

    def test_Ad_preserves_B(self, model, rng):
        ad = model.Ad(model.random_element(rng))
        assert np.linalg.norm(ad.T @ model.B @ ad - model.B) < 1e-10

    def test_structure_constants_bracket(self, model, rng):
        x, y = model.random_algebra(rng), model.random_algebra(rng)
        direct = model.coeffs(model.algebra_matrix(x) @ model.algebra_matrix(y)
                              - model.algebra_matrix(y) @ model.algebra_matrix(x))
        assert np.linalg.norm(model.bracket(x, y) - direct) < 1e-10

    def test_log_inverts_exp(self, model, rng):
        x = model.random_algebra(rng, 0.5)
        assert np.linalg.norm(model.log(model.exp(x)) - x) < 1e-8

    def test_dexp_frame_matches_difference_quotient(self, model, rng):
        x = model.random_algebra(rng, 0.6)
        t = model.dexp_frame(x)
        h = 1e-6
        for _ in range(3):
            u = model.random_algebra(rng)
            g = model.exp(x)
            num = model.coeffs(np.linalg.inv(g) @ (model.exp(x + h * u) - model.exp(x - h * u))) / (2 * h)
            assert np.linalg.norm(t @ u - num) < 1e-6


class TestSpecificModels:
    def test_su2_structure_constants(self, su2):
        # [X_i, X_j] = ε_ijk X_k with B the identity
        assert np.allclose(su2.B, np.eye(3))
        eps = np.zeros((3, 3, 3))
        for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
            eps[i, j, k] = 1.0
            eps[j, i, k] = -1.0
        assert np.allclose(su2.structure, eps, atol=1e-12)

    def test_su2_adjoint_is_rotation(self, su2, rng):
        ad = su2.Ad(su2.random_element(rng))
        assert np.linalg.norm(ad.T @ ad - np.eye(3)) < 1e-12
        assert abs(np.linalg.det(ad) - 1) < 1e-12

    def test_so3_not_liftable_flag(self):
        assert not so3_model().liftable

    def test_so3_has_projective_plane_class(self):
        # the class of a half-turn is two-dimensional (the half-turn axes)
        from purespin.geometry import class_point
        so3 = so3_model()
        g = scipy.linalg.expm(np.pi * so3.basis[2])
        assert class_point(so3, g).class_dim == 2

    def test_semidirect_B_split(self, semidirect):
        eig = np.linalg.eigvalsh(semidirect.B)
        assert (np.sum(eig > 0), np.sum(eig < 0)) == (3, 3)

    def test_su3_dimension(self, su3):
        assert su3.dim == 8 and np.allclose(su3.B, np.eye(8))


class TestExtensions:
    def test_product_blocks(self, su2, rng):
        prod = product_model(su2, su2)
        assert prod.dim == 6
        g = prod.random_element(rng)
        ad = prod.Ad(g)
        assert np.linalg.norm(ad.T @ prod.B @ ad - prod.B) < 1e-10

    def test_swap_double_group_law(self, su2, rng):
        wr = swap_double_model(su2)
        g1, g2 = su2.random_element(rng), su2.random_element(rng)
        h1, h2 = su2.random_element(rng), su2.random_element(rng)
        # (σ, (g1,g2)) (σ, (h1,h2)) = (1, (g1 h2, g2 h1))
        prod = wr.mul(wr.pair(g1, g2, swap=True), wr.pair(h1, h2, swap=True))
        expect = wr.pair(g1 @ h2, g2 @ h1, swap=False)
        assert np.linalg.norm(prod - expect) < 1e-12

    def test_swap_adjoint_exchanges_factors(self, su2, rng):
        wr = swap_double_model(su2)
        sigma = wr.pair(np.eye(2), np.eye(2), swap=True)
        ad = wr.Ad(sigma)
        x = wr.random_algebra(rng)
        swapped = np.concatenate([x[3:], x[:3]])
        assert np.linalg.norm(ad @ x - swapped) < 1e-12

    def test_blocks_round_trip(self, su2, rng):
        wr = swap_double_model(su2)
        g1, g2 = su2.random_element(rng), su2.random_element(rng)
        for swap in (False, True):
            b1, b2, s = wr.blocks(wr.pair(g1, g2, swap=swap))
            assert s == swap
            assert np.linalg.norm(b1 - g1) < 1e-12 and np.linalg.norm(b2 - g2) < 1e-12

    def test_unknown_model_rejected(self):
        with pytest.raises(ValueError):
            get_model("e8")
