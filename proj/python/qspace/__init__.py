"""Graded automorphism groups of multiparameter quantum affine spaces.

Thin wrapper around the native core: q-matrices and members travel as JSON,
reports come back as plain dicts.
"""

import json

from . import _core
from ._core import CapExceededError, Matrix, QMatrix, ValidationError

__all__ = [
    "CapExceededError",
    "Matrix",
    "QMatrix",
    "ValidationError",
    "analyze",
    "blocks",
    "census",
    "compatible_permutations",
    "decompose",
    "is_member",
    "load_matrix",
    "load_q",
    "matrix_from",
    "member_violation",
    "q_from",
    "relations_preserved",
    "skeleton",
    "skeletons",
    "verify_homomorphism",
]


def q_from(obj):
    """Build a QMatrix from a dict (or JSON string) with field/n/entries."""
    if isinstance(obj, QMatrix):
        return obj
    if isinstance(obj, str):
        return QMatrix.from_json(obj)
    return QMatrix.from_json(json.dumps(obj))


def matrix_from(obj):
    """Build a Matrix from a dict (or JSON string) with field/n/entries."""
    if isinstance(obj, Matrix):
        return obj
    if isinstance(obj, str):
        return Matrix.from_json(obj)
    return Matrix.from_json(json.dumps(obj))


def load_q(path):
    return QMatrix.load(str(path))


def load_matrix(path):
    return Matrix.load(str(path))


def blocks(q):
    """Partition of {1..n} into groups of equal q-rows."""
    return _core.block_decomposition(q_from(q))


def analyze(q, engine="pruned", workers=1, cap=0):
    """Full structure report as a dict (orders, generators, structure string)."""
    return json.loads(_core.analyze(q_from(q), engine, workers, cap))


def compatible_permutations(q, engine="pruned", workers=1, cap=0):
    """Cycle notation for every compatible permutation, sorted."""
    return _core.compatible_permutations(q_from(q), engine, workers, cap)


def is_member(q, m):
    return _core.is_member(q_from(q), matrix_from(m))


def member_violation(q, m):
    """First violated quadruple (i, j, s, t), or None."""
    return _core.member_violation(q_from(q), matrix_from(m))


def relations_preserved(q, m):
    """Ground-truth oracle: the substitution preserves all defining relations."""
    return _core.relations_preserved(q_from(q), matrix_from(m))


def skeleton(m):
    """One skeleton permutation in cycle notation, or None."""
    return _core.skeleton(matrix_from(m))


def skeletons(m, cap=10**6):
    return _core.skeletons(matrix_from(m), cap)


def decompose(q, m):
    """Split a member into permutation part and block-diagonal part."""
    return json.loads(_core.decompose(q_from(q), matrix_from(m)))


def census(q, p=0, budget=2**24, workers=1):
    """Brute-force member count over F_p versus the predicted order."""
    return json.loads(_core.census(q_from(q), p, budget, workers))


def verify_homomorphism(q, samples=200, seed=12345):
    return _core.verify_homomorphism(q_from(q), samples, seed)
