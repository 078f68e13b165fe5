"""Flat-metric descriptors and rational approximation in the invariant cone.

A shape is an exact, holonomy-invariant, positive definite Gram matrix on
the ambient space of a fixed group; such a form makes the group an
arithmetic subgroup of a rationally defined orthogonal affine group, which
is exactly what :func:`is_arithmetic_shape` tests. Arbitrary
(floating-point) target metrics are pulled into this cone by
:func:`rationalize`: average over the holonomy, round each entry to the
best rational approximation with bounded denominator, then average again
to restore exact invariance.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence, Union

from .bieberbach import BieberbachGroup, HolonomyGroup, theta_average
from .errors import DimensionMismatch, NotPositiveDefinite
from .exactlin import SymmetricForm, is_positive_definite

#: Floating-point targets count as positive definite when every Cholesky
#: pivot exceeds this tolerance.
PD_TOLERANCE = 1e-9


class RealForm:
    """Symmetric matrix with double-precision entries; an inexact target."""

    __slots__ = ("dim", "entries")

    def __init__(self, entries: Sequence[Sequence[float]]):
        data = [[float(x) for x in row] for row in entries]
        n = len(data)
        if n == 0 or any(len(row) != n for row in data):
            raise DimensionMismatch("a real form needs a square matrix")
        for i in range(n):
            for j in range(i + 1, n):
                gap = abs(data[i][j] - data[j][i])
                scale = max(1.0, abs(data[i][j]))
                if gap > 1e-9 * scale:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) are not symmetric")
                data[j][i] = data[i][j]
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "entries", tuple(tuple(row) for row in data))

    def __setattr__(self, name, value):
        raise AttributeError("RealForm is immutable")

    @staticmethod
    def from_form(form: SymmetricForm) -> RealForm:
        return RealForm([[float(x) for x in row] for row in form.matrix.entries])

    def cholesky_pivots(self) -> Optional[list[float]]:
        """Diagonal pivots of a Cholesky pass, or None if a pivot is nonpositive."""
        n = self.dim
        a = [list(row) for row in self.entries]
        pivots = []
        for k in range(n):
            d = a[k][k]
            if d <= 0:
                return None
            pivots.append(d)
            for i in range(k + 1, n):
                f = a[i][k] / d
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
        return pivots

    def is_positive_definite(self, tolerance: float = PD_TOLERANCE) -> bool:
        pivots = self.cholesky_pivots()
        return pivots is not None and all(p > tolerance for p in pivots)

    def to_exact(self) -> SymmetricForm:
        """Exact form with the same entries; doubles are dyadic rationals."""
        return SymmetricForm([[Fraction(x) for x in row] for row in self.entries])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RealForm):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"RealForm({[list(r) for r in self.entries]!r})"


class ShapeDescriptor:
    """A group together with an exact Gram matrix for a flat metric on it.

    Valid descriptors carry a positive definite form that is exactly
    invariant under the group's holonomy. Construction does not enforce
    this (so that the test below has something to reject); use
    :func:`is_arithmetic_shape` to check, and :func:`rationalize` to build
    descriptors that satisfy it by construction.
    """

    __slots__ = ("group", "form")

    def __init__(self, group: BieberbachGroup, form: SymmetricForm):
        if form.dim != group.dim:
            raise DimensionMismatch(
                f"form dimension {form.dim} does not match group dimension {group.dim}"
            )
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "form", form)

    def __setattr__(self, name, value):
        raise AttributeError("ShapeDescriptor is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ShapeDescriptor):
            return NotImplemented
        return self.group == other.group and self.form == other.form

    def __hash__(self) -> int:
        return hash((self.group, self.form))

    def __repr__(self) -> str:
        return f"ShapeDescriptor({self.group!r}, {self.form!r})"


def best_rational_approx(value: Fraction, max_denominator: int) -> Fraction:
    """Closest rational with denominator at most ``max_denominator``.

    ``Fraction.limit_denominator`` walks the continued-fraction convergents
    and semiconvergents, which gives the optimal approximation for the
    bound; the test suite cross-checks this against brute force.
    """
    if max_denominator < 1:
        raise ValueError("denominator bound must be at least 1")
    return value.limit_denominator(max_denominator)


def rationalize(
    target: Union[RealForm, SymmetricForm],
    theta: HolonomyGroup,
    denom_bound: int,
) -> ShapeDescriptor:
    """Arithmetic shape approximating a target metric.

    The target is averaged over the holonomy (exactly; double entries are
    dyadic rationals), each entry of the average is rounded to the best
    rational with denominator at most ``denom_bound``, and the rounded
    matrix is averaged again so invariance holds exactly. Before the final
    average each entry is within ``1/denom_bound`` of the averaged target.
    ``NotPositiveDefinite`` is raised when rounding destroys definiteness;
    callers should retry with a larger bound.
    """
    if denom_bound < 1:
        raise ValueError("denominator bound must be at least 1")
    if isinstance(target, RealForm):
        if not target.is_positive_definite():
            raise NotPositiveDefinite("target is not numerically positive definite")
        exact = target.to_exact()
    else:
        exact = target
    if exact.dim != theta.dim:
        raise DimensionMismatch(
            f"target dimension {exact.dim} does not match group dimension {theta.dim}"
        )
    averaged = theta_average(exact, theta)
    rounded = SymmetricForm(
        [
            [best_rational_approx(x, denom_bound) for x in row]
            for row in averaged.matrix.entries
        ]
    )
    invariant = theta_average(rounded, theta)
    return ShapeDescriptor(theta.group, invariant)


def _entries_as_floats(form: Union[SymmetricForm, RealForm]) -> tuple[int, list[list[float]]]:
    if isinstance(form, SymmetricForm):
        if not is_positive_definite(form):
            raise NotPositiveDefinite("form is not positive definite")
        return form.dim, [[float(x) for x in row] for row in form.matrix.entries]
    if isinstance(form, RealForm):
        if not form.is_positive_definite():
            raise NotPositiveDefinite("form is not numerically positive definite")
        return form.dim, [list(row) for row in form.entries]
    raise TypeError(f"expected SymmetricForm or RealForm, got {type(form).__name__}")


def _frobenius(entries: Sequence[Sequence[float]]) -> float:
    return math.sqrt(sum(x * x for row in entries for x in row))


def shape_distance(
    a: Union[SymmetricForm, RealForm], b: Union[SymmetricForm, RealForm]
) -> float:
    """Scale-free Frobenius distance between two positive definite forms.

    Each matrix is scaled to unit Frobenius norm first, so the distance is
    zero exactly when the forms are positive scalar multiples of each
    other. This compares ambient Gram matrices; it does not quotient by
    the affine normalizer of any group, so it is an upper bound for any
    distance between similarity classes.
    """
    dim_a, ea = _entries_as_floats(a)
    dim_b, eb = _entries_as_floats(b)
    if dim_a != dim_b:
        raise DimensionMismatch(f"dimensions {dim_a} and {dim_b} differ")
    na = _frobenius(ea)
    nb = _frobenius(eb)
    return math.sqrt(
        sum(
            (x / na - y / nb) ** 2
            for row_a, row_b in zip(ea, eb)
            for x, y in zip(row_a, row_b)
        )
    )


def is_arithmetic_shape(shape: ShapeDescriptor, theta: Optional[HolonomyGroup] = None) -> bool:
    """Whether the descriptor's form defines an arithmetic structure.

    True exactly when the form is rational (always, by the type), positive
    definite, and exactly invariant under the group's holonomy. These are
    the conditions under which the stabilized orthogonal affine group is
    rationally defined and contains the group as an arithmetic subgroup.
    """
    from .bieberbach import holonomy

    if not is_positive_definite(shape.form):
        return False
    theta = theta if theta is not None else holonomy(shape.group)
    gram = shape.form.matrix
    return all(g.transpose() * gram * g == gram for g in theta.elements)
