import random
from fractions import Fraction as F

import pytest

from flatcusps.bieberbach import AffineMap, BieberbachGroup, catalog, holonomy, theta_average
from flatcusps.errors import DimensionMismatch, NotFormIsometry, NotPositiveDefinite
from flatcusps.exactlin import Matrix, SymmetricForm, char_poly, ldl_signature
from flatcusps.lorentz import (
    LorentzEmbedding,
    embed_affine,
    embed_group,
    embed_translation,
    hyperbolic_conjugator,
    integralize,
    linear_image,
    model_form,
    outer_pairing,
    translation_log,
    verify_embedding,
)
from flatcusps.shapes import ShapeDescriptor

HALF = F(1, 2)


def random_vector(rng, n):
    return [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]


class TestModelForm:
    def test_identity_base(self):
        model = model_form(SymmetricForm.identity(2))
        assert model.model_form == SymmetricForm.diagonal([1, 1, 1, -1])
        assert model.v_inf == (F(0), F(0), F(1), F(1))
        assert model.v_0 == (F(0), F(0), F(1), F(-1))

    def test_smallest_case(self):
        model = model_form(SymmetricForm([[1]]))
        assert model.model_form == SymmetricForm.diagonal([1, 1, -1])

    def test_diagonal_base_signature(self):
        model = model_form(SymmetricForm.diagonal([2, 3]))
        assert model.model_form == SymmetricForm.diagonal([2, 3, 1, -1])
        assert ldl_signature(model.model_form) == (3, 1, 0)

    def test_null_vectors(self):
        model = model_form(SymmetricForm([[2, 1], [1, 3]]))
        b = model.model_form
        assert b.evaluate(model.v_inf, model.v_inf) == 0
        assert b.evaluate(model.v_0, model.v_0) == 0
        assert b.evaluate(model.v_inf, model.v_0) == 2

    def test_rejects_indefinite_base(self):
        with pytest.raises(NotPositiveDefinite):
            model_form(SymmetricForm.diagonal([1, -1]))

    def test_custom_basis_accepted_when_isometric(self):
        base = SymmetricForm.identity(2)
        swapped = [(0, 1, 0, 0), (1, 0, 0, 0)]
        model = model_form(base, vinf_basis=swapped)
        assert model.lift([1, 2]) == (F(2), F(1), F(0), F(0))

    def test_custom_basis_rejected_when_not_isometric(self):
        base = SymmetricForm.identity(2)
        with pytest.raises(ValueError):
            model_form(base, vinf_basis=[(2, 0, 0, 0), (0, 1, 0, 0)])
        with pytest.raises(ValueError):
            model_form(base, vinf_basis=[(1, 0, 1, 0), (0, 1, 0, 0)])


class TestOuterPairing:
    def test_elementary_matrix(self):
        form = SymmetricForm.identity(3)
        e1 = (1, 0, 0)
        e2 = (0, 1, 0)
        assert outer_pairing(e1, e2, form) == Matrix(
            [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
        )

    def test_lorentz_weighted(self):
        form = SymmetricForm.diagonal([1, 1, -1])
        result = outer_pairing((1, 0, 0), (0, 1, 1), form)
        assert result == Matrix([[0, 1, -1], [0, 0, 0], [0, 0, 0]])

    def test_defining_property(self):
        rng = random.Random(2)
        form = SymmetricForm([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
        for _ in range(10):
            x = random_vector(rng, 3)
            y = random_vector(rng, 3)
            z = random_vector(rng, 3)
            applied = outer_pairing(x, y, form).matvec(z)
            expected = tuple(form.evaluate(z, y) * xi for xi in map(F, x))
            assert applied == expected

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            outer_pairing((1, 0), (1, 0, 0), SymmetricForm.identity(3))


class TestEmbedTranslation:
    def test_zero_vector(self):
        model = model_form(SymmetricForm.identity(2))
        assert embed_translation([0, 0], model) == Matrix.identity(4)

    def test_one_dimensional_example(self):
        model = model_form(SymmetricForm([[1]]))
        expected = Matrix([[1, 1, -1], [-1, HALF, HALF], [-1, -HALF, F(3, 2)]])
        assert embed_translation([1], model) == expected

    def test_preserves_form_and_fixes_vinf(self):
        rng = random.Random(4)
        model = model_form(SymmetricForm([[2, 1], [1, 3]]))
        gram = model.model_form.matrix
        for _ in range(20):
            e = embed_translation(random_vector(rng, 2), model)
            assert e.transpose() * gram * e == gram
            assert e.matvec(model.v_inf) == model.v_inf

    def test_additive_and_inverse(self):
        rng = random.Random(5)
        model = model_form(SymmetricForm.diagonal([2, 3]))
        for _ in range(20):
            v = random_vector(rng, 2)
            w = random_vector(rng, 2)
            vw = [a + b for a, b in zip(v, w)]
            assert embed_translation(v, model) * embed_translation(w, model) == embed_translation(vw, model)
            assert embed_translation(v, model).inverse() == embed_translation([-a for a in v], model)

    def test_log_nilpotency_pattern(self):
        model = model_form(SymmetricForm.identity(2))
        zero_log = translation_log([0, 0], model)
        assert zero_log.is_zero()
        log = translation_log([F(1, 3), 2], model)
        assert not (log * log).is_zero()
        assert (log * log * log).is_zero()

    def test_null_cone_preserved_but_v0_moves(self):
        model = model_form(SymmetricForm.identity(2))
        e = embed_translation([1, 0], model)
        image_v0 = e.matvec(model.v_0)
        assert image_v0 != model.v_0
        assert model.model_form.evaluate(image_v0, image_v0) == 0


class TestEmbedAffine:
    def test_identity_map(self):
        model = model_form(SymmetricForm.identity(2))
        assert embed_affine(AffineMap.identity(2), model) == Matrix.identity(4)

    def test_klein_generator_factorization(self):
        model = model_form(SymmetricForm.diagonal([2, 3]))
        g = AffineMap(Matrix.diagonal([1, -1]), [HALF, 0])
        manual = embed_translation([HALF, 0], model) * Matrix.block_diag(
            Matrix.diagonal([1, -1]), Matrix.identity(2)
        )
        image = embed_affine(g, model)
        assert image == manual
        gram = model.model_form.matrix
        assert image.transpose() * gram * image == gram
        assert image.matvec(model.v_inf) == model.v_inf

    def test_pure_rotation_is_block_diagonal(self):
        model = model_form(SymmetricForm.identity(2))
        rotation = Matrix([[0, -1], [1, 0]])
        image = embed_affine(AffineMap(rotation, [0, 0]), model)
        assert image == Matrix.block_diag(rotation, Matrix.identity(2))

    def test_non_isometry_rejected(self):
        model = model_form(SymmetricForm.identity(2))
        with pytest.raises(NotFormIsometry):
            embed_affine(AffineMap(Matrix.diagonal([1, 2]), [0, 0]), model)

    def test_equivariance_identity(self):
        model = model_form(SymmetricForm.diagonal([2, 3]))
        a = Matrix.diagonal([1, -1])
        r = linear_image(a, model)
        rng = random.Random(6)
        for _ in range(10):
            w = random_vector(rng, 2)
            lhs = r * embed_translation(w, model) * r.inverse()
            assert lhs == embed_translation(a.matvec(w), model)


class TestEmbedGroup:
    def test_torus2_identity_shape(self):
        from flatcusps.exactlin import IntPolynomial

        group = catalog("torus-2")
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm.identity(2)))
        assert len(embedding.images) == 2
        unipotent = IntPolynomial([-1, 1]) ** 4
        for image in embedding.images:
            assert image.matvec(embedding.model.v_inf) == embedding.model.v_inf
            assert char_poly(image) == unipotent

    def test_torus1_matches_translation_example(self):
        group = catalog("torus-1")
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm([[1]])))
        assert embedding.images[0] == Matrix(
            [[1, 1, -1], [-1, HALF, HALF], [-1, -HALF, F(3, 2)]]
        )

    def test_klein_mixed_images(self):
        group = catalog("klein")
        shape = ShapeDescriptor(group, SymmetricForm.diagonal([2, 3]))
        embedding = embed_group(group, shape)
        report = verify_embedding(embedding)
        assert report.overall
        checks = report.per_generator
        assert checks[0].unipotent_translation is True
        assert checks[1].unipotent_translation is None

    def test_wrong_group_rejected(self):
        shape = ShapeDescriptor(catalog("torus-2"), SymmetricForm.identity(2))
        with pytest.raises(DimensionMismatch):
            embed_group(catalog("klein"), shape)

    def test_non_invariant_shape_rejected(self):
        group = catalog("klein")
        shape = ShapeDescriptor(group, SymmetricForm([[2, 1], [1, 3]]))
        with pytest.raises(NotFormIsometry):
            embed_group(group, shape)


class TestIntegralize:
    def test_already_integral_unchanged(self):
        # with base 2I the quadratic tail B(v,v)/2 is already integral
        group = catalog("torus-2")
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm.diagonal([2, 2])))
        assert all(m.is_integral() for m in embedding.images)
        result, scale = integralize(embedding)
        assert scale == 1
        assert result is embedding

    def test_identity_base_needs_scale_two(self):
        group = catalog("torus-2")
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm.identity(2)))
        result, scale = integralize(embedding)
        assert scale == 2
        assert all(m.is_integral() for m in result.images)

    def test_half_parameter_needs_four_with_odd_base(self):
        group = BieberbachGroup([AffineMap([[1]], [HALF])])
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm([[1]])))
        result, scale = integralize(embedding)
        assert scale == 4
        assert all(m.is_integral() for m in result.images)

    def test_half_parameter_needs_two_with_even_base(self):
        group = BieberbachGroup([AffineMap([[1]], [HALF])])
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm([[2]])))
        result, scale = integralize(embedding)
        assert scale == 2
        assert result.images[0] == Matrix([[1, 1, -1], [-2, 0, 1], [-2, -1, 2]])

    def test_klein_catalog_scale_two(self):
        group = catalog("klein")
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm.diagonal([2, 3])))
        result, scale = integralize(embedding)
        assert scale == 2
        assert all(m.is_integral() for m in result.images)
        assert verify_embedding(result).overall

    def test_conjugator_preserves_form(self):
        model = model_form(SymmetricForm.diagonal([2, 3]))
        gram = model.model_form.matrix
        for c in (1, 2, 3, 5):
            a = hyperbolic_conjugator(model, c)
            assert a.transpose() * gram * a == gram
            assert a.matvec(model.v_inf) == tuple(c * x for x in model.v_inf)

    def test_relations_preserved(self):
        group = catalog("klein")
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm.diagonal([2, 3])))
        result, scale = integralize(embedding)
        conjugator = hyperbolic_conjugator(embedding.model, scale)
        inverse = conjugator.inverse()
        for a in range(len(embedding.images)):
            for b in range(len(embedding.images)):
                product = embedding.images[a] * embedding.images[b]
                assert result.images[a] * result.images[b] == conjugator * product * inverse


class TestVerifyEmbedding:
    def test_torus_all_pass(self):
        group = catalog("torus-2")
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm.identity(2)))
        report = verify_embedding(embedding)
        assert report.overall
        for checks in report.per_generator:
            assert checks.form_preserved and checks.fixes_vinf
            assert checks.unipotent_translation is True
            assert checks.equivariance and checks.log_cubes_to_zero
            assert checks.nilpotency_degree == 3

    def test_corrupted_image_detected(self):
        group = catalog("torus-2")
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm.identity(2)))
        rows = [list(row) for row in embedding.images[0].entries]
        rows[0][1] += F(1, 7)
        corrupted = LorentzEmbedding(
            embedding.model, group, [Matrix(rows), embedding.images[1]]
        )
        report = verify_embedding(corrupted)
        assert not report.overall
        assert not report.per_generator[0].form_preserved
        assert report.per_generator[1].form_preserved

    def test_klein_equivariance(self):
        group = catalog("klein")
        embedding = embed_group(group, ShapeDescriptor(group, SymmetricForm.diagonal([2, 3])))
        report = verify_embedding(embedding)
        assert report.overall
        assert all(c.equivariance for c in report.per_generator)

    def test_zero_translation_degree_one(self):
        group = BieberbachGroup(
            [
                AffineMap.translation_by([1, 0]),
                AffineMap.translation_by([0, 1]),
                AffineMap(Matrix([[0, -1], [1, 0]]), [HALF, HALF]),
            ]
        )
        theta = holonomy(group)
        shape = ShapeDescriptor(group, theta_average(SymmetricForm.identity(2), theta))
        embedding = embed_group(group, shape)
        report = verify_embedding(embedding)
        assert report.overall
        degrees = [c.nilpotency_degree for c in report.per_generator]
        assert degrees[0] == 3 and degrees[1] == 3 and degrees[2] == 3

    def test_model_signature_always_lorentzian(self):
        for name in ("torus-3", "klein", "hantzsche-wendt", "sixth-turn"):
            group = catalog(name)
            theta = holonomy(group)
            shape = ShapeDescriptor(group, theta_average(SymmetricForm.identity(group.dim), theta))
            embedding = embed_group(group, shape)
            n = group.dim
            assert ldl_signature(embedding.model.model_form) == (n + 1, 1, 0)
