"""Bieberbach groups presented by rational affine generators.

A crystallographic group is handled through three derived objects: its
holonomy (the finite closure of the generators' linear parts, each element
carrying a witness word), its translation lattice, and an exact fixed-point
criterion deciding torsion-freeness. The translation lattice is generated
from coset-transversal (Schreier) products, so any finite generating set of
a genuine Bieberbach group recovers the full lattice, including minimal
two-generator presentations such as the Hantzsche-Wendt group.

A small catalog of verified low-dimensional flat-manifold groups is
included. Catalog entries are standard crystallographic presentations but
are never taken on faith: every entry is re-checked against the holonomy,
lattice, and torsion oracles each time it is built.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    HolonomyBound,
    NotPositiveDefinite,
    RankDeficient,
    UnknownName,
)
from .exactlin import (
    Matrix,
    Scalar,
    SymmetricForm,
    Vector,
    denominator_lcm,
    has_integer_solution,
    is_positive_definite,
    lattice_basis,
    left_null_space,
    vec,
    vec_add,
    vec_is_zero,
)

#: Default ceiling for holonomy closures. Crystallographic point groups in
#: dimensions up to six never exceed a few thousand elements; anything that
#: blows past this bound is not a Bieberbach presentation.
DEFAULT_MAX_ORDER = 1024


class AffineMap:
    """Invertible affine map ``x -> A x + t`` with rational coefficients."""

    __slots__ = ("linear", "translation")

    def __init__(self, linear, translation: Sequence[Scalar]):
        m = linear if isinstance(linear, Matrix) else Matrix(linear)
        t = vec(translation)
        if not m.is_square():
            raise DimensionMismatch("linear part must be square")
        if len(t) != m.rows:
            raise DimensionMismatch(
                f"translation length {len(t)} does not match dimension {m.rows}"
            )
        if m.det() == 0:
            raise ValueError("linear part is singular")
        object.__setattr__(self, "linear", m)
        object.__setattr__(self, "translation", t)

    def __setattr__(self, name, value):
        raise AttributeError("AffineMap is immutable")

    @staticmethod
    def identity(dim: int) -> AffineMap:
        return AffineMap(Matrix.identity(dim), [0] * dim)

    @staticmethod
    def translation_by(t: Sequence[Scalar]) -> AffineMap:
        return AffineMap(Matrix.identity(len(tuple(t))), t)

    @property
    def dim(self) -> int:
        return self.linear.rows

    def apply(self, point: Sequence[Scalar]) -> Vector:
        return vec_add(self.linear.matvec(point), self.translation)

    def inverse(self) -> AffineMap:
        inv = self.linear.inverse()
        return AffineMap(inv, tuple(-x for x in inv.matvec(self.translation)))

    def is_translation(self) -> bool:
        return self.linear.is_identity()

    def is_identity(self) -> bool:
        return self.is_translation() and vec_is_zero(self.translation)

    def __mul__(self, other: AffineMap) -> AffineMap:
        return compose(self, other)

    def __pow__(self, exponent: int) -> AffineMap:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = AffineMap.identity(self.dim)
        for _ in range(exponent):
            result = compose(result, self)
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineMap):
            return NotImplemented
        return self.linear == other.linear and self.translation == other.translation

    def __hash__(self) -> int:
        return hash((self.linear, self.translation))

    def __repr__(self) -> str:
        t = ", ".join(str(x) for x in self.translation)
        return f"AffineMap({self.linear!r}, [{t}])"


def compose(a: AffineMap, b: AffineMap) -> AffineMap:
    """Composition ``a o b``, i.e. ``(A_a A_b, A_a t_b + t_a)``."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim} differ")
    return AffineMap(
        a.linear * b.linear,
        vec_add(a.linear.matvec(b.translation), a.translation),
    )


class BieberbachGroup:
    """Candidate Bieberbach group given by affine generators.

    Construction only validates shape (consistent dimension, invertible
    linear parts). Finiteness of the holonomy, fullness of the translation
    lattice, and torsion-freeness are semantic properties checked by
    :func:`holonomy`, :func:`translation_lattice`, and
    :func:`is_torsion_free`; inputs failing them are rejected loudly there.
    """

    __slots__ = ("dim", "generators", "name")

    def __init__(self, generators: Sequence[AffineMap], name: Optional[str] = None):
        gens = tuple(generators)
        if not gens:
            raise ValueError("a group needs at least one generator")
        dim = gens[0].dim
        if any(g.dim != dim for g in gens):
            raise DimensionMismatch("generators have inconsistent dimensions")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):
        raise AttributeError("BieberbachGroup is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, BieberbachGroup):
            return NotImplemented
        return self.dim == other.dim and self.generators == other.generators

    def __hash__(self) -> int:
        return hash((self.dim, self.generators))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<BieberbachGroup{label} dim={self.dim} generators={len(self.generators)}>"


class HolonomyGroup:
    """Finite image of a group under projection to the linear parts.

    ``elements[k]`` is a point-group matrix and ``witnesses[k]`` is one
    affine element of the source group projecting onto it; ``elements[0]``
    is the identity with the identity witness.
    """

    __slots__ = ("group", "elements", "witnesses", "_index")

    def __init__(
        self,
        group: BieberbachGroup,
        elements: Sequence[Matrix],
        witnesses: Sequence[AffineMap],
    ):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "witnesses", tuple(witnesses))
        object.__setattr__(
            self, "_index", {m: i for i, m in enumerate(self.elements)}
        )

    def __setattr__(self, name, value):
        raise AttributeError("HolonomyGroup is immutable")

    @property
    def dim(self) -> int:
        return self.group.dim

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, m: Matrix) -> bool:
        return m in self._index

    def witness_for(self, m: Matrix) -> AffineMap:
        return self.witnesses[self._index[m]]

    def element_order(self, m: Matrix) -> int:
        """Multiplicative order of a point-group element."""
        ident = Matrix.identity(self.dim)
        power = m
        for k in range(1, self.order + 1):
            if power == ident:
                return k
            power = power * m
        raise ValueError("element order exceeds the group order; not a member")

    def __repr__(self) -> str:
        return f"<HolonomyGroup order={self.order} dim={self.dim}>"


def holonomy(group: BieberbachGroup, max_order: int = DEFAULT_MAX_ORDER) -> HolonomyGroup:
    """Closure of the generators' linear parts under multiplication.

    Breadth-first closure starting from the identity; every discovered
    matrix keeps a witness obtained by composing generator witnesses, so
    witnesses really are elements of the group. A closure with more than
    ``max_order`` elements raises ``HolonomyBound``; such input is not
    accepted as a Bieberbach presentation.
    """
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    ident = Matrix.identity(group.dim)
    seen: dict[Matrix, AffineMap] = {ident: AffineMap.identity(group.dim)}
    frontier = [ident]
    while frontier:
        fresh = []
        for h in frontier:
            witness = seen[h]
            for gen in group.generators:
                product = h * gen.linear
                if product not in seen:
                    if len(seen) >= max_order:
                        raise HolonomyBound(
                            f"holonomy closure exceeds {max_order} elements"
                        )
                    seen[product] = compose(witness, gen)
                    fresh.append(product)
        frontier = fresh
    return HolonomyGroup(group, tuple(seen.keys()), tuple(seen.values()))


def translation_lattice(
    group: BieberbachGroup, theta: Optional[HolonomyGroup] = None
) -> Matrix:
    """Basis of the translation subgroup, as the columns of an n x n matrix.

    The translation subgroup is the kernel of the projection onto the
    holonomy. With the holonomy witnesses as a coset transversal it is
    generated by the Schreier products ``s(h) g s(h A_g)^{-1}``, all of
    which are pure translations; the holonomy-order powers of the
    generators are pure translations as well and are folded in. Inputs
    whose translations do not span raise ``RankDeficient``.
    """
    theta = theta if theta is not None else holonomy(group)
    vectors: list[Vector] = []
    for h, witness in zip(theta.elements, theta.witnesses):
        for gen in group.generators:
            product = compose(witness, gen)
            rep = theta.witness_for(product.linear)
            schreier = compose(product, rep.inverse())
            assert schreier.is_translation()
            vectors.append(schreier.translation)
    for gen in group.generators:
        vectors.append((gen ** theta.order).translation)
    basis = lattice_basis(vectors, group.dim)
    if len(basis) < group.dim:
        raise RankDeficient(
            f"translations span rank {len(basis)} < {group.dim}; input rejected"
        )
    return Matrix.from_columns(basis)


def is_torsion_free(
    group: BieberbachGroup,
    theta: Optional[HolonomyGroup] = None,
    lattice: Optional[Matrix] = None,
) -> bool:
    """Exact torsion test via the fixed-point criterion.

    An element ``(h, u)`` of finite order has a fixed point, and conversely.
    The coset of a nontrivial holonomy element ``h`` with witness ``(h, t)``
    consists of the maps ``(h, t + l)`` over lattice vectors ``l``, so the
    coset contains torsion exactly when ``(I - h) x = t + l`` is solvable,
    i.e. when ``t`` lies in ``im(I - h) + L``. Killing the image with its
    left null space reduces this to integral solvability of a linear
    system, decided by Smith-style diagonalization over the integers.
    """
    theta = theta if theta is not None else holonomy(group)
    lattice = lattice if lattice is not None else translation_lattice(group, theta)
    n = group.dim
    ident = Matrix.identity(n)
    for h, witness in zip(theta.elements, theta.witnesses):
        if h == ident:
            continue
        constraints = left_null_space(ident - h)
        if not constraints:
            # I - h invertible: the witness coset always contains a map
            # with a fixed point, hence torsion.
            return False
        t = witness.translation
        rows = []
        rhs = []
        for nu in constraints:
            row = [
                sum(a * b for a, b in zip(nu, lattice.column(j)))
                for j in range(n)
            ]
            b = -sum(a * b for a, b in zip(nu, t))
            den = denominator_lcm(list(row) + [b])
            rows.append([int(x * den) for x in row])
            rhs.append(int(b * den))
        if has_integer_solution(rows, rhs):
            return False
    return True


def theta_average(form: SymmetricForm, theta: HolonomyGroup) -> SymmetricForm:
    """Average ``(1/|theta|) sum_g g^T F g`` of a positive definite form.

    The result is symmetric, positive definite, and exactly invariant under
    every element of the holonomy, because right multiplication permutes
    the summands.
    """
    if form.dim != theta.dim:
        raise DimensionMismatch(
            f"form dimension {form.dim} does not match group dimension {theta.dim}"
        )
    if not is_positive_definite(form):
        raise NotPositiveDefinite("theta average requires a positive definite form")
    total = Matrix.zeros(form.dim, form.dim)
    for g in theta.elements:
        total = total + g.transpose() * form.matrix * g
    return SymmetricForm(Fraction(1, theta.order) * total)


# ---------------------------------------------------------------------------
# Catalog of verified low-dimensional flat-manifold groups
# ---------------------------------------------------------------------------


def _half() -> Fraction:
    return Fraction(1, 2)


def _torus_generators(n: int) -> list[AffineMap]:
    ident = Matrix.identity(n)
    return [
        AffineMap(ident, [1 if j == i else 0 for j in range(n)]) for i in range(n)
    ]


def _klein_generators() -> list[AffineMap]:
    return [
        AffineMap(Matrix.identity(2), [0, 1]),
        AffineMap(Matrix.diagonal([1, -1]), [_half(), 0]),
    ]


def _screw(axis_block: Sequence[Sequence[int]], shift: Fraction) -> AffineMap:
    linear = Matrix(
        [
            [axis_block[0][0], axis_block[0][1], 0],
            [axis_block[1][0], axis_block[1][1], 0],
            [0, 0, 1],
        ]
    )
    return AffineMap(linear, [0, 0, shift])


def _turn_generators(block: Sequence[Sequence[int]], shift: Fraction) -> list[AffineMap]:
    ident = Matrix.identity(3)
    return [
        _screw(block, shift),
        AffineMap(ident, [1, 0, 0]),
        AffineMap(ident, [0, 1, 0]),
    ]


def _hantzsche_wendt_generators() -> list[AffineMap]:
    h = _half()
    return [
        AffineMap(Matrix.diagonal([1, -1, -1]), [h, h, 0]),
        AffineMap(Matrix.diagonal([-1, 1, -1]), [0, h, h]),
    ]


def _amphicosm_generators(second: bool) -> list[AffineMap]:
    h = _half()
    ident = Matrix.identity(3)
    glide = AffineMap(Matrix.diagonal([1, -1, 1]), [h, 0, h if second else 0])
    return [glide, AffineMap(ident, [0, 1, 0]), AffineMap(ident, [0, 0, 1])]


def _catalog_builders() -> dict[str, tuple]:
    entries: dict[str, tuple] = {}
    for n in range(1, 7):
        entries[f"torus-{n}"] = (_torus_generators, (n,))
    entries["klein"] = (_klein_generators, ())
    entries["half-turn"] = (_turn_generators, (((-1, 0), (0, -1)), _half()))
    entries["third-turn"] = (_turn_generators, (((0, -1), (1, -1)), Fraction(1, 3)))
    entries["quarter-turn"] = (_turn_generators, (((0, -1), (1, 0)), Fraction(1, 4)))
    entries["sixth-turn"] = (_turn_generators, (((0, -1), (1, 1)), Fraction(1, 6)))
    entries["hantzsche-wendt"] = (_hantzsche_wendt_generators, ())
    entries["first-amphicosm"] = (_amphicosm_generators, (False,))
    entries["second-amphicosm"] = (_amphicosm_generators, (True,))
    return entries


_CATALOG = _catalog_builders()


def catalog_names() -> list[str]:
    return list(_CATALOG.keys())


def catalog(name: str) -> BieberbachGroup:
    """Verified group from the built-in catalog.

    Tori up to dimension six, the Klein bottle group, and six of the ten
    three-dimensional flat-manifold groups (the four screw types, the
    Hantzsche-Wendt group, and both amphicosms). Entries are re-verified on
    every call: the holonomy must close, the translations must span, and
    the torsion test must pass. ``UnknownName`` is raised for anything
    else.
    """
    if name not in _CATALOG:
        known = ", ".join(catalog_names())
        raise UnknownName(f"unknown catalog group {name!r}; known names: {known}")
    builder, args = _CATALOG[name]
    group = BieberbachGroup(builder(*args), name=name)
    theta = holonomy(group)
    lattice = translation_lattice(group, theta)
    if not is_torsion_free(group, theta, lattice):
        raise AssertionError(f"catalog entry {name!r} failed the torsion oracle")
    return group
