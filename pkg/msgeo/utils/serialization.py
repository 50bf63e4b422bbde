"""
JSON-friendly encodings of exact values.

Scalars are strings: integers without denominator (``"3"``), other rationals as
``"p/q"``. Vectors are lists of scalars, matrices lists of rows.
"""
import sympy

from ..algebra.exterior_algebra import Form, to_scalar


def scalar_to_str(value):
    value = to_scalar(value)
    if value.q == 1:
        return str(value.p)
    return f"{value.p}/{value.q}"


def parse_scalar(text):
    return to_scalar(text)


def vector_to_json(vector):
    return [scalar_to_str(c) for c in vector]


def matrix_to_json(matrix):
    """Rows of an exact matrix (sympy matrix or LinearMap)."""
    matrix = getattr(matrix, "matrix", matrix)
    return [[scalar_to_str(c) for c in matrix.row(i)] for i in range(matrix.rows)]


def matrix_from_json(rows):
    return sympy.ImmutableMatrix([[to_scalar(c) for c in row] for row in rows])


def form_to_records(form):
    """[{"indices": [...], "coeff": "p/q"}, ...] in increasing index order."""
    return [{"indices": list(key), "coeff": scalar_to_str(value)} for key, value in form.terms()]


def form_from_records(dim, degree, records):
    return Form(dim, degree, {tuple(r["indices"]): to_scalar(r["coeff"]) for r in records})


def form_to_json(form):
    return {"dim": form.dim, "degree": form.degree, "terms": form_to_records(form)}


def subspace_to_json(W):
    return {"ambient": W.ambient, "dim": W.dim, "basis": [vector_to_json(v) for v in W.basis]}


def classification_to_json(result):
    return {
        "l": result.l,
        "isotropic": result.isotropic,
        "coisotropic": result.coisotropic,
        "lagrangian": result.lagrangian,
        "multisymplectic": result.multisymplectic,
        "summary": result.summary,
    }


def darboux_to_json(result, expansion=None):
    """DarbouxResult with its psi matrix, basis and model descriptor."""
    labels = result.model.coordinate_labels()
    payload = {
        "model": result.model.describe(),
        "psi": matrix_to_json(result.psi),
        "normalization": scalar_to_str(result.normalization),
        "darboux_basis": [
            {"label": label, "vector": vector_to_json(v)} for label, v in zip(labels, result.darboux_basis)
        ],
        "V": subspace_to_json(result.V),
        "iterations": result.iterations,
        "relations_hold": result.relations_hold(),
    }
    if expansion is not None:
        payload["expansion_certified"] = expansion.certified
        payload["expansion_terms"] = len(expansion.terms)
    return payload
