"""JSON encoding and decoding for groups, forms, shapes, embeddings, and
certificates.

Rationals travel as strings like ``"3/4"`` (plain integers also accepted)
so files stay exact; decimal numbers are accepted only where the data is
inherently inexact (approximation targets). Parse errors carry the path of
the offending field.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from .bieberbach import AffineMap, BieberbachGroup
from .errors import ValidationError
from .exactlin import IntPolynomial, Matrix, SymmetricForm
from .lorentz import GeneratorChecks, LorentzEmbedding, VerificationReport
from .selberg import MatrixGroupInput, SelbergCertificate
from .shapes import RealForm, ShapeDescriptor


def format_rational(x: Fraction) -> str:
    return str(x)


def parse_rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(path, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(path, f"not a rational: {value!r}") from None
    if isinstance(value, float):
        raise ValidationError(
            path, "decimal input is not accepted here; use a \"p/q\" string"
        )
    raise ValidationError(path, f"expected a rational, got {type(value).__name__}")


def parse_number(value: Any, path: str) -> float:
    """Inexact entry: float, int, or exact ``p/q`` string."""
    if isinstance(value, bool):
        raise ValidationError(path, "expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise ValidationError(path, f"not a number: {value!r}") from None
    raise ValidationError(path, f"expected a number, got {type(value).__name__}")


def _expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ValidationError(path, f"expected a list, got {type(value).__name__}")
    return value


def _expect_dict(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(path, f"expected an object, got {type(value).__name__}")
    return value


def _expect_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(path, f"expected an integer, got {type(value).__name__}")
    return value


def matrix_to_lists(m: Matrix) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m.entries]


def vector_to_list(v: Sequence[Fraction]) -> list[str]:
    return [format_rational(x) for x in v]


def parse_vector(data: Any, path: str) -> tuple[Fraction, ...]:
    items = _expect_list(data, path)
    return tuple(parse_rational(x, f"{path}[{i}]") for i, x in enumerate(items))


def parse_matrix(data: Any, path: str) -> Matrix:
    rows = _expect_list(data, path)
    if not rows:
        raise ValidationError(path, "matrix must not be empty")
    parsed = [parse_vector(row, f"{path}[{i}]") for i, row in enumerate(rows)]
    width = len(parsed[0])
    for i, row in enumerate(parsed):
        if len(row) != width:
            raise ValidationError(f"{path}[{i}]", "matrix rows have unequal lengths")
    return Matrix(parsed)


def parse_real_matrix(data: Any, path: str) -> list[list[float]]:
    rows = _expect_list(data, path)
    if not rows:
        raise ValidationError(path, "matrix must not be empty")
    parsed = [
        [parse_number(x, f"{path}[{i}][{j}]") for j, x in enumerate(_expect_list(row, f"{path}[{i}]"))]
        for i, row in enumerate(rows)
    ]
    width = len(parsed[0])
    for i, row in enumerate(parsed):
        if len(row) != width:
            raise ValidationError(f"{path}[{i}]", "matrix rows have unequal lengths")
    return parsed


# ---------------------------------------------------------------------------
# Groups and shapes
# ---------------------------------------------------------------------------


def group_to_dict(group: BieberbachGroup) -> dict:
    return {
        "dim": group.dim,
        "name": group.name,
        "generators": [
            {
                "linear": matrix_to_lists(g.linear),
                "translation": vector_to_list(g.translation),
            }
            for g in group.generators
        ],
    }


def parse_group(data: Any, path: str = "") -> BieberbachGroup:
    root = path or "group"
    obj = _expect_dict(data, root)
    if "dim" not in obj:
        raise ValidationError(f"{root}.dim", "missing required field")
    dim = _expect_int(obj["dim"], f"{root}.dim")
    if dim < 1:
        raise ValidationError(f"{root}.dim", "dimension must be positive")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise ValidationError(f"{root}.name", "name must be a string")
    if "generators" not in obj:
        raise ValidationError(f"{root}.generators", "missing required field")
    gens_data = _expect_list(obj["generators"], f"{root}.generators")
    if not gens_data:
        raise ValidationError(f"{root}.generators", "at least one generator is required")
    generators = []
    for i, item in enumerate(gens_data):
        gpath = f"{root}.generators[{i}]"
        entry = _expect_dict(item, gpath)
        if "linear" not in entry:
            raise ValidationError(f"{gpath}.linear", "missing required field")
        if "translation" not in entry:
            raise ValidationError(f"{gpath}.translation", "missing required field")
        linear = parse_matrix(entry["linear"], f"{gpath}.linear")
        translation = parse_vector(entry["translation"], f"{gpath}.translation")
        if linear.rows != dim or linear.cols != dim:
            raise ValidationError(f"{gpath}.linear", f"expected a {dim}x{dim} matrix")
        if len(translation) != dim:
            raise ValidationError(
                f"{gpath}.translation", f"expected a vector of length {dim}"
            )
        if linear.det() == 0:
            raise ValidationError(f"{gpath}.linear", "linear part is singular")
        generators.append(AffineMap(linear, translation))
    return BieberbachGroup(generators, name=name)


def form_to_dict(form: SymmetricForm) -> dict:
    return {"dim": form.dim, "matrix": matrix_to_lists(form.matrix)}


def parse_form(data: Any, path: str = "form") -> SymmetricForm:
    obj = _expect_dict(data, path)
    if "matrix" not in obj:
        raise ValidationError(f"{path}.matrix", "missing required field")
    matrix = parse_matrix(obj["matrix"], f"{path}.matrix")
    if "dim" in obj:
        dim = _expect_int(obj["dim"], f"{path}.dim")
        if matrix.rows != dim:
            raise ValidationError(
                f"{path}.matrix", f"matrix size {matrix.rows} does not match dim {dim}"
            )
    if not matrix.is_symmetric():
        raise ValidationError(f"{path}.matrix", "matrix is not symmetric")
    return SymmetricForm(matrix)


def parse_real_form(data: Any, path: str = "target") -> RealForm:
    obj = _expect_dict(data, path)
    if "matrix" not in obj:
        raise ValidationError(f"{path}.matrix", "missing required field")
    entries = parse_real_matrix(obj["matrix"], f"{path}.matrix")
    if "dim" in obj:
        dim = _expect_int(obj["dim"], f"{path}.dim")
        if len(entries) != dim:
            raise ValidationError(
                f"{path}.matrix", f"matrix size {len(entries)} does not match dim {dim}"
            )
    try:
        return RealForm(entries)
    except ValueError as exc:
        raise ValidationError(f"{path}.matrix", str(exc)) from None


def shape_to_dict(shape: ShapeDescriptor) -> dict:
    out = group_to_dict(shape.group)
    out["form"] = matrix_to_lists(shape.form.matrix)
    return out


def parse_shape(data: Any, path: str = "shape") -> ShapeDescriptor:
    obj = _expect_dict(data, path)
    group = parse_group(obj, path)
    if "form" not in obj:
        raise ValidationError(f"{path}.form", "missing required field")
    matrix = parse_matrix(obj["form"], f"{path}.form")
    if not matrix.is_symmetric():
        raise ValidationError(f"{path}.form", "matrix is not symmetric")
    if matrix.rows != group.dim:
        raise ValidationError(
            f"{path}.form", f"form size {matrix.rows} does not match dim {group.dim}"
        )
    return ShapeDescriptor(group, SymmetricForm(matrix))


# ---------------------------------------------------------------------------
# Embeddings and verification reports
# ---------------------------------------------------------------------------


def embedding_to_dict(embedding: LorentzEmbedding, scale: int | None = None) -> dict:
    model = embedding.model
    out = {
        "dim": model.n,
        "base_form": matrix_to_lists(model.base_form.matrix),
        "model_form": matrix_to_lists(model.model_form.matrix),
        "v_inf": vector_to_list(model.v_inf),
        "v_0": vector_to_list(model.v_0),
        "group": group_to_dict(embedding.group),
        "images": [matrix_to_lists(m) for m in embedding.images],
    }
    if scale is not None:
        out["scale"] = scale
    return out


def checks_to_dict(checks: GeneratorChecks) -> dict:
    return {
        "form_preserved": checks.form_preserved,
        "fixes_vinf": checks.fixes_vinf,
        "unipotent_translation": checks.unipotent_translation,
        "equivariance": checks.equivariance,
        "log_cubes_to_zero": checks.log_cubes_to_zero,
        "nilpotency_degree": checks.nilpotency_degree,
    }


def report_to_dict(report: VerificationReport) -> dict:
    return {
        "generators": [checks_to_dict(c) for c in report.per_generator],
        "overall": report.overall,
    }


# ---------------------------------------------------------------------------
# Congruence inputs and certificates
# ---------------------------------------------------------------------------


def parse_matrix_group(data: Any, path: str = "group") -> tuple[int, list[Matrix]]:
    """Parse ``{"n": int, "generators": [[[rational]]]}``."""
    obj = _expect_dict(data, path)
    if "n" not in obj:
        raise ValidationError(f"{path}.n", "missing required field")
    n = _expect_int(obj["n"], f"{path}.n")
    if "generators" not in obj:
        raise ValidationError(f"{path}.generators", "missing required field")
    items = _expect_list(obj["generators"], f"{path}.generators")
    matrices = []
    for i, item in enumerate(items):
        m = parse_matrix(item, f"{path}.generators[{i}]")
        if m.rows != n or m.cols != n:
            raise ValidationError(
                f"{path}.generators[{i}]", f"expected an {n}x{n} matrix"
            )
        matrices.append(m)
    return n, matrices


def build_matrix_group_input(
    lambda_data: Any, gamma_data: Any
) -> MatrixGroupInput:
    n_lambda, lambda_gens = parse_matrix_group(lambda_data, "lambda")
    n_gamma, gamma_gens = parse_matrix_group(gamma_data, "gamma")
    if n_lambda != n_gamma:
        raise ValidationError("gamma.n", f"degree {n_gamma} does not match lambda degree {n_lambda}")
    try:
        return MatrixGroupInput(n_lambda, lambda_gens, gamma_gens)
    except ValueError as exc:
        raise ValidationError("lambda.generators", str(exc)) from None


def polynomial_to_dict(poly: IntPolynomial) -> dict:
    return {
        "coefficients": [format_rational(c) for c in poly.coeffs],
        "text": str(poly),
    }


def certificate_to_dict(certificate: SelbergCertificate) -> dict:
    return {
        "n": certificate.n,
        "prime": certificate.prime,
        "bad_primes": {
            str(p): list(reasons) for p, reasons in sorted(certificate.bad_primes.items())
        },
        "torsion_polynomials": [polynomial_to_dict(p) for p in certificate.torsion_polys],
        "residue_evidence": [
            {
                "polynomial": str(e.polynomial),
                "polynomial_mod_q": list(e.polynomial_mod_q),
                "unipotent_mod_q": list(e.unipotent_mod_q),
                "distinct": e.distinct,
            }
            for e in certificate.residue_evidence
        ],
    }
