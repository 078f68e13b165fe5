"""Embeddings of flat-manifold groups into rational Lorentz groups.

Given a positive definite rational form ``B_K`` on n-space, the model form
``B = B_K (+) diag(1, -1)`` has signature ``(n+1, 1)`` on (n+2)-space; the
vectors ``v_inf = e_{n+1} + e_{n+2}`` and ``v_0 = e_{n+1} - e_{n+2}`` are
B-null, and the first n coordinate vectors span their B-orthogonal
complement. Translations embed into the unipotent stabilizer of ``v_inf``
through the exponential of the B-skew rank-two map built from outer
pairings, and B_K-isometries embed block-diagonally. The images generate a
subgroup of ``O(B; Q)`` fixing ``v_inf``; conjugating by a rational
hyperbolic element scales the unipotent parameters by a positive integer
``c`` and, for a suitable smallest ``c``, lands every image in integer
matrices. Every identity used along the way is checkable in exact
arithmetic, and :func:`verify_embedding` rechecks them all from scratch.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .bieberbach import AffineMap, BieberbachGroup
from .errors import DimensionMismatch, NotFormIsometry, NotPositiveDefinite
from .exactlin import (
    IntPolynomial,
    Matrix,
    SymmetricForm,
    Vector,
    char_poly,
    denominator_lcm,
    is_positive_definite,
    ldl_signature,
    nilpotent_exp,
    unit_vector,
    vec,
)
from .shapes import ShapeDescriptor


class LorentzModel:
    """Signature (n+1, 1) model data attached to a base form.

    Built by :func:`model_form`. Holds the model form ``B``, the null
    vectors ``v_inf`` and ``v_0``, a basis of their B-orthogonal complement
    (the translation directions), and the cached frame matrix used to
    extend base-form isometries to the ambient space.
    """

    __slots__ = (
        "n",
        "base_form",
        "model_form",
        "v_inf",
        "v_0",
        "vinf_basis",
        "_frame",
        "_frame_inverse",
    )

    def __init__(
        self,
        base_form: SymmetricForm,
        model: SymmetricForm,
        v_inf: Vector,
        v_0: Vector,
        vinf_basis: Sequence[Vector],
    ):
        object.__setattr__(self, "n", base_form.dim)
        object.__setattr__(self, "base_form", base_form)
        object.__setattr__(self, "model_form", model)
        object.__setattr__(self, "v_inf", v_inf)
        object.__setattr__(self, "v_0", v_0)
        object.__setattr__(self, "vinf_basis", tuple(vinf_basis))
        frame = Matrix.from_columns(list(self.vinf_basis) + [v_0, v_inf])
        object.__setattr__(self, "_frame", frame)
        object.__setattr__(self, "_frame_inverse", frame.inverse())

    def __setattr__(self, name, value):
        raise AttributeError("LorentzModel is immutable")

    @property
    def ambient_dim(self) -> int:
        return self.n + 2

    def lift(self, v: Sequence) -> Vector:
        """Ambient vector with the given coordinates in the V_inf basis."""
        w = vec(v)
        if len(w) != self.n:
            raise DimensionMismatch(
                f"expected a vector of length {self.n}, got {len(w)}"
            )
        out = [Fraction(0)] * self.ambient_dim
        for coord, basis_vector in zip(w, self.vinf_basis):
            if coord:
                for i, x in enumerate(basis_vector):
                    out[i] += coord * x
        return tuple(out)

    def __repr__(self) -> str:
        return f"<LorentzModel n={self.n}>"


def model_form(
    base: SymmetricForm, vinf_basis: Optional[Sequence[Sequence]] = None
) -> LorentzModel:
    """Model data for a positive definite rational base form.

    ``B = base (+) diag(1, -1)``; the default complement basis is the first
    n coordinate vectors. A custom basis may be supplied: it must consist
    of vectors B-orthogonal to both null vectors whose Gram matrix under B
    equals the base form (an isometric identification of n-space with the
    complement).
    """
    if not is_positive_definite(base):
        raise NotPositiveDefinite("base form must be positive definite")
    n = base.dim
    model = base.direct_sum(SymmetricForm.diagonal([1, -1]))
    v_inf = tuple(
        Fraction(1) if i >= n else Fraction(0) for i in range(n + 2)
    )
    v_0 = tuple(
        Fraction(1) if i == n else Fraction(-1) if i == n + 1 else Fraction(0)
        for i in range(n + 2)
    )
    if vinf_basis is None:
        basis = [unit_vector(n + 2, i) for i in range(n)]
    else:
        basis = [vec(b) for b in vinf_basis]
        if len(basis) != n or any(len(b) != n + 2 for b in basis):
            raise DimensionMismatch("complement basis must be n vectors of length n+2")
        for b in basis:
            if model.evaluate(b, v_inf) != 0 or model.evaluate(b, v_0) != 0:
                raise ValueError("complement basis vector is not orthogonal to the null pair")
        for i, bi in enumerate(basis):
            for j, bj in enumerate(basis):
                if model.evaluate(bi, bj) != base.matrix[i, j]:
                    raise ValueError("complement basis is not isometric to the base form")
    assert ldl_signature(model) == (n + 1, 1, 0)
    assert model.evaluate(v_inf, v_inf) == 0
    assert model.evaluate(v_0, v_0) == 0
    assert model.evaluate(v_inf, v_0) != 0
    return LorentzModel(base, model, v_inf, v_0, basis)


def outer_pairing(x: Sequence, y: Sequence, form: SymmetricForm) -> Matrix:
    """Rank-one operator ``z -> B(z, y) x``, i.e. the matrix ``x (By)^T``."""
    xv, yv = vec(x), vec(y)
    if len(xv) != form.dim or len(yv) != form.dim:
        raise DimensionMismatch("vector lengths do not match the form dimension")
    by = form.matrix.matvec(yv)
    return Matrix([[a * b for b in by] for a in xv])


def translation_log(v: Sequence, model: LorentzModel) -> Matrix:
    """B-skew generator whose exponential is the translation image.

    ``M = lift(v) (B v_inf)^T - v_inf (B lift(v))^T``; it kills ``v_inf``,
    satisfies ``M^3 = 0``, and ``M^T B + B M = 0`` exactly.
    """
    lifted = model.lift(v)
    return outer_pairing(lifted, model.v_inf, model.model_form) - outer_pairing(
        model.v_inf, lifted, model.model_form
    )


def embed_translation(v: Sequence, model: LorentzModel) -> Matrix:
    """Unipotent image of a translation vector.

    The exponential of :func:`translation_log`; it preserves the model
    form, fixes ``v_inf``, and is additive in ``v``.
    """
    return nilpotent_exp(translation_log(v, model))


def linear_image(a: Matrix, model: LorentzModel) -> Matrix:
    """Extension of a base-form isometry acting trivially on the null plane.

    Acts as ``a`` on the complement (through the model's basis) and as the
    identity on the span of ``v_0`` and ``v_inf``. With the standard basis
    this is just ``blockdiag(a, I_2)``. Raises ``NotFormIsometry`` when
    ``a`` does not preserve the base form.
    """
    base = model.base_form.matrix
    if a.transpose() * base * a != base:
        raise NotFormIsometry("linear part does not preserve the base form")
    block = Matrix.block_diag(a, Matrix.identity(2))
    return model._frame * block * model._frame_inverse


def embed_affine(g: AffineMap, model: LorentzModel) -> Matrix:
    """Image of an affine isometry: unipotent factor times linear factor."""
    if g.dim != model.n:
        raise DimensionMismatch(
            f"affine map dimension {g.dim} does not match model dimension {model.n}"
        )
    rotation = linear_image(g.linear, model)
    return embed_translation(g.translation, model) * rotation


class LorentzEmbedding:
    """A group's generators together with their images in ``O(B; Q)``."""

    __slots__ = ("model", "group", "images")

    def __init__(
        self, model: LorentzModel, group: BieberbachGroup, images: Sequence[Matrix]
    ):
        if len(images) != len(group.generators):
            raise DimensionMismatch("one image per generator is required")
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "images", tuple(images))

    def __setattr__(self, name, value):
        raise AttributeError("LorentzEmbedding is immutable")

    def __repr__(self) -> str:
        return f"<LorentzEmbedding group={self.group.name or 'anonymous'} n={self.model.n}>"


def embed_group(group: BieberbachGroup, shape: ShapeDescriptor) -> LorentzEmbedding:
    """Embed a group using one of its arithmetic shapes as the base form.

    The shape must belong to the group; each generator's linear part must
    preserve the shape's form (``NotFormIsometry`` otherwise, which is
    exactly a failure of holonomy invariance).
    """
    if shape.group != group:
        raise DimensionMismatch("shape was built for a different group")
    model = model_form(shape.form)
    images = [embed_affine(g, model) for g in group.generators]
    return LorentzEmbedding(model, group, images)


# ---------------------------------------------------------------------------
# Integralization by hyperbolic conjugation
# ---------------------------------------------------------------------------


def hyperbolic_conjugator(model: LorentzModel, c: int) -> Matrix:
    """Form-preserving map acting as identity on the complement and scaling
    ``v_inf`` by ``c`` (and ``v_0`` by ``1/c``)."""
    if c < 1:
        raise ValueError("the scale must be a positive integer")
    p = Fraction(c * c + 1, 2 * c)
    q = Fraction(c * c - 1, 2 * c)
    block = Matrix([[p, q], [q, p]])
    return Matrix.block_diag(Matrix.identity(model.n), block)


def _prime_power_split(m: int) -> dict[int, int]:
    """Prime factorization ``{p: exponent}`` of a positive integer."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= m:
        while m % f == 0:
            out[f] = out.get(f, 0) + 1
            m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _smallest_integral_scale(embedding: LorentzEmbedding) -> int:
    """Exact smallest conjugation scale that clears all denominators.

    The conjugated image of a generator ``(A, t)`` is ``T(c t) R(A)``,
    whose entries away from the (integer) linear factor are either ``c``
    times an entry of ``M R(A)`` or ``c^2`` times an entry of
    ``(M^2/2) R(A)``; the two kinds occupy disjoint positions (``M`` lives
    in the off-diagonal blocks, ``M^2`` in the corner two-by-two), so no
    cancellation between them is possible and the smallest working ``c``
    clears each kind separately: per prime ``p``, the valuation of ``c``
    must reach the valuation of the linear denominators and half the
    valuation of the quadratic ones, rounded up.
    """
    model = embedding.model
    linear_values = []
    quadratic_values = []
    for g in embedding.group.generators:
        rotation = linear_image(g.linear, model)
        if not rotation.is_integral():
            raise ValueError(
                "a linear factor has fractional entries; hyperbolic conjugation "
                "cannot integralize this embedding"
            )
        log = translation_log(g.translation, model)
        tail = Fraction(1, 2) * (log * log)
        linear_values.extend(x for row in (log * rotation).entries for x in row)
        quadratic_values.extend(x for row in (tail * rotation).entries for x in row)
    linear_den = denominator_lcm(linear_values)
    quadratic_den = denominator_lcm(quadratic_values)
    exponents = _prime_power_split(linear_den)
    for p, e in _prime_power_split(quadratic_den).items():
        exponents[p] = max(exponents.get(p, 0), (e + 1) // 2)
    scale = 1
    for p, e in exponents.items():
        scale *= p**e
    return scale


def integralize(embedding: LorentzEmbedding) -> tuple[LorentzEmbedding, int]:
    """Conjugate an embedding into integer matrices.

    Finds the smallest positive integer ``c`` such that conjugating every
    image by the hyperbolic element of scale ``c`` yields integer entries,
    then performs the conjugation and checks the result. Group relations
    are untouched (conjugation is an automorphism), the model form is
    preserved exactly, and all verification checks survive. Returns the
    conjugated embedding and ``c``; an already integral embedding comes
    back unchanged with scale 1.
    """
    model = embedding.model
    c = _smallest_integral_scale(embedding)
    if c == 1:
        assert all(m.is_integral() for m in embedding.images)
        return embedding, 1
    conjugator = hyperbolic_conjugator(model, c)
    inverse = conjugator.inverse()
    conjugated = [conjugator * image * inverse for image in embedding.images]
    assert all(m.is_integral() for m in conjugated)
    return LorentzEmbedding(model, embedding.group, conjugated), c


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


class GeneratorChecks:
    """Outcome of the exact checks for a single generator image."""

    __slots__ = (
        "form_preserved",
        "fixes_vinf",
        "unipotent_translation",
        "equivariance",
        "log_cubes_to_zero",
        "nilpotency_degree",
    )

    def __init__(
        self,
        form_preserved: bool,
        fixes_vinf: bool,
        unipotent_translation: Optional[bool],
        equivariance: bool,
        log_cubes_to_zero: bool,
        nilpotency_degree: Optional[int],
    ):
        object.__setattr__(self, "form_preserved", form_preserved)
        object.__setattr__(self, "fixes_vinf", fixes_vinf)
        object.__setattr__(self, "unipotent_translation", unipotent_translation)
        object.__setattr__(self, "equivariance", equivariance)
        object.__setattr__(self, "log_cubes_to_zero", log_cubes_to_zero)
        object.__setattr__(self, "nilpotency_degree", nilpotency_degree)

    def __setattr__(self, name, value):
        raise AttributeError("GeneratorChecks is immutable")

    def passed(self) -> bool:
        return (
            self.form_preserved
            and self.fixes_vinf
            and (self.unipotent_translation is not False)
            and self.equivariance
            and self.log_cubes_to_zero
        )


class VerificationReport:
    """Per-generator exact checks plus their conjunction."""

    __slots__ = ("per_generator", "overall")

    def __init__(self, per_generator: Sequence[GeneratorChecks]):
        object.__setattr__(self, "per_generator", tuple(per_generator))
        object.__setattr__(self, "overall", all(c.passed() for c in per_generator))

    def __setattr__(self, name, value):
        raise AttributeError("VerificationReport is immutable")

    def __repr__(self) -> str:
        status = "ok" if self.overall else "FAILED"
        return f"<VerificationReport {status} generators={len(self.per_generator)}>"


def _unipotent_poly(n: int) -> IntPolynomial:
    return IntPolynomial([-1, 1]) ** n


def verify_embedding(embedding: LorentzEmbedding) -> VerificationReport:
    """Recompute every exact identity the construction promises.

    Per generator ``(A, t)`` with image ``E``: form preservation
    ``E^T B E = B``; ``E v_inf = v_inf``; for pure translations the
    characteristic polynomial is ``(t-1)^(n+2)``; the semidirect
    compatibility ``R(A) T(w) R(A)^{-1} = T(A w)`` on basis vectors; and
    the log of the unipotent factor cubes to zero. Failures are recorded,
    never raised.
    """
    model = embedding.model
    gram = model.model_form.matrix
    n = model.n
    ambient = model.ambient_dim
    unipotent = _unipotent_poly(ambient)
    basis = [unit_vector(n, i) for i in range(n)]
    translation_cache: dict[tuple, Matrix] = {}

    def cached_translation(w) -> Matrix:
        key = tuple(w)
        if key not in translation_cache:
            translation_cache[key] = embed_translation(key, model)
        return translation_cache[key]

    results = []
    for g, image in zip(embedding.group.generators, embedding.images):
        form_preserved = image.transpose() * gram * image == gram
        fixes_vinf = image.matvec(model.v_inf) == model.v_inf

        if g.is_translation():
            unipotent_translation: Optional[bool] = char_poly(image) == unipotent
        else:
            unipotent_translation = None

        try:
            rotation = linear_image(g.linear, model)
            rotation_inv = rotation.inverse()
            equivariance = all(
                rotation * cached_translation(w) * rotation_inv
                == cached_translation(g.linear.matvec(w))
                for w in basis
            )
            unipotent_factor = image * rotation_inv
        except NotFormIsometry:
            equivariance = False
            unipotent_factor = image

        shifted = unipotent_factor - Matrix.identity(ambient)
        log = shifted - Fraction(1, 2) * (shifted * shifted)
        degree = None
        power = Matrix.identity(ambient)
        for k in range(1, ambient + 1):
            power = power * log
            if power.is_zero():
                degree = k
                break
        log_cubes_to_zero = (log * log * log).is_zero()

        results.append(
            GeneratorChecks(
                form_preserved,
                fixes_vinf,
                unipotent_translation,
                equivariance,
                log_cubes_to_zero,
                degree,
            )
        )
    return VerificationReport(results)
