"""Derivatives of quasiseparable matrices with respect to their parameters.

Every parameter of either representation gets a ``DerivativeTerm`` holding
the unweighted partial derivative of the matrix.  Derivatives are assembled
from running monomial products rather than by dividing entries of the
materialized matrix out, so they stay correct when individual parameters
are zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qsrep import (
    GvTangentParams,
    QsParams,
    gv_materialize,
    gv_tangent_to_trig,
    qs_materialize,
    split_lower_diag_upper,
)


@dataclass
class DerivativeTerm:
    """Derivative of the matrix with respect to one parameter.

    family: parameter family name ("p", "a", ..., "l", "u", ...).
    index:  one-based index of the parameter within its family, following
            the same convention as the JSON schema.
    value:  current value of the parameter.
    matrix: n-by-n derivative; the unweighted partial for the
            ``qs_derivatives``/``gv_derivatives`` constructors, the
            parameter-weighted form for the ``*_weighted_*`` constructors.
    """

    family: str
    index: int
    value: float
    matrix: np.ndarray


def _lower_row_profile(qs: QsParams, i: int) -> np.ndarray:
    """Row i (one-based) of the lower part with the p_i factor removed.

    Entry j (one-based, j < i) is a_{i-1} * ... * a_{j+1} * q_j.
    """
    n = qs.n
    out = np.zeros(n)
    val = 1.0
    for j in range(i - 2, -1, -1):  # zero-based column
        out[j] = val * qs.q[j]
        if j >= 1:
            val *= qs.a[j - 1]
    return out


def _lower_col_profile(qs: QsParams, j: int) -> np.ndarray:
    """Column j (one-based) of the lower part with the q_j factor removed.

    Entry i (one-based, i > j) is p_i * a_{i-1} * ... * a_{j+1}.
    """
    n = qs.n
    out = np.zeros(n)
    val = 1.0
    for i in range(j, n):  # zero-based row
        out[i] = qs.p[i - 1] * val
        if i < n - 1:
            val *= qs.a[i - 1]
    return out


def _upper_col_profile(qs: QsParams, j: int) -> np.ndarray:
    """Column j (one-based) of the upper part with the h_j factor removed.

    Entry i (one-based, i < j) is g_i * b_{i+1} * ... * b_{j-1}.
    """
    n = qs.n
    out = np.zeros(n)
    val = 1.0
    for i in range(j - 2, -1, -1):
        out[i] = qs.g[i] * val
        if i >= 1:
            val *= qs.b[i - 1]
    return out


def _upper_row_profile(qs: QsParams, i: int) -> np.ndarray:
    """Row i (one-based) of the upper part with the g_i factor removed.

    Entry j (one-based, j > i) is b_{i+1} * ... * b_{j-1} * h_j.
    """
    n = qs.n
    out = np.zeros(n)
    val = 1.0
    for j in range(i, n):
        out[j] = val * qs.h[j - 1]
        if j < n - 1:
            val *= qs.b[j - 1]
    return out


def qs_derivatives(qs: QsParams) -> list[DerivativeTerm]:
    """All 7n-8 partial derivatives of the generator representation."""
    n = qs.n
    terms: list[DerivativeTerm] = []

    for i in range(2, n + 1):  # p_i: row i picks up the rest of its monomial
        dA = np.zeros((n, n))
        dA[i - 1, :] = _lower_row_profile(qs, i)
        terms.append(DerivativeTerm("p", i, qs.p[i - 2], dA))

    for i in range(2, n):  # a_i: rank-one block over rows i+1..n, cols 1..i-1
        u = np.zeros(n)
        val = 1.0
        for r in range(i, n):  # zero-based rows i..n-1 (one-based i+1..n)
            u[r] = qs.p[r - 1] * val
            if r < n - 1:
                val *= qs.a[r - 1]
        w = np.zeros(n)
        val = 1.0
        for c in range(i - 2, -1, -1):
            w[c] = val * qs.q[c]
            if c >= 1:
                val *= qs.a[c - 1]
        terms.append(DerivativeTerm("a", i, qs.a[i - 2], np.outer(u, w)))

    for j in range(1, n):  # q_j: column j
        dA = np.zeros((n, n))
        dA[:, j - 1] = _lower_col_profile(qs, j)
        terms.append(DerivativeTerm("q", j, qs.q[j - 1], dA))

    for i in range(1, n + 1):  # d_i
        dA = np.zeros((n, n))
        dA[i - 1, i - 1] = 1.0
        terms.append(DerivativeTerm("d", i, qs.d[i - 1], dA))

    for i in range(1, n):  # g_i: row i of the upper part
        dA = np.zeros((n, n))
        dA[i - 1, :] = _upper_row_profile(qs, i)
        terms.append(DerivativeTerm("g", i, qs.g[i - 1], dA))

    for i in range(2, n):  # b_i: rank-one block over rows 1..i-1, cols i+1..n
        u = np.zeros(n)
        val = 1.0
        for r in range(i - 2, -1, -1):
            u[r] = qs.g[r] * val
            if r >= 1:
                val *= qs.b[r - 1]
        w = np.zeros(n)
        val = 1.0
        for c in range(i, n):
            w[c] = val * qs.h[c - 1]
            if c < n - 1:
                val *= qs.b[c - 1]
        terms.append(DerivativeTerm("b", i, qs.b[i - 2], np.outer(u, w)))

    for j in range(2, n + 1):  # h_j: column j of the upper part
        dA = np.zeros((n, n))
        dA[:, j - 1] = _upper_col_profile(qs, j)
        terms.append(DerivativeTerm("h", j, qs.h[j - 2], dA))

    return terms


def gv_derivatives(gv: GvTangentParams) -> list[DerivativeTerm]:
    """All 5n-6 partial derivatives of the tangent GV representation.

    Uses dc/dl = -s c^2 and ds/dl = c^3 (and the analogous identities for
    r, t as functions of u).  The l_i derivative splits into a row-i part,
    where only the head cosine depends on l_i, and a rank-one block part
    for rows below i, where the sine appears once in each monomial.
    """
    n = gv.n
    trig = gv_tangent_to_trig(gv)
    c, s, v, d, w, r, t = trig.c, trig.s, trig.v, trig.d, trig.w, trig.r, trig.t
    terms: list[DerivativeTerm] = []

    for i in range(2, n):  # l_i, zero-based tangent index i-2
        ci, si = c[i - 2], s[i - 2]
        dA = np.zeros((n, n))
        # row i: entry is c_i * (monomial without c_i); d(c_i)/dl = -s c^2
        row = np.zeros(n)
        val = 1.0
        for j in range(i - 2, -1, -1):
            row[j] = val * v[j]
            if j >= 1:
                val *= s[j - 1]
        dA[i - 1, :] = (-si * ci**2) * row
        # rows i+1..n: s_i appears once; replace it by c_i^3
        col_head = np.zeros(n)
        val = 1.0
        for rr in range(i, n):
            col_head[rr] = (c[rr - 1] if rr < n - 1 else 1.0) * val
            if rr < n - 1:
                val *= s[rr - 1]
        row_tail = np.zeros(n)
        val = 1.0
        for j in range(i - 2, -1, -1):
            row_tail[j] = val * v[j]
            if j >= 1:
                val *= s[j - 1]
        dA += (ci**3) * np.outer(col_head, row_tail)
        terms.append(DerivativeTerm("l", i, gv.l[i - 2], dA))

    for j in range(1, n):  # v_j: column j of the lower part
        dA = np.zeros((n, n))
        val = 1.0
        for i in range(j, n):
            dA[i, j - 1] = (c[i - 1] if i < n - 1 else 1.0) * val
            if i < n - 1:
                val *= s[i - 1]
        terms.append(DerivativeTerm("v", j, gv.v[j - 1], dA))

    for i in range(1, n + 1):  # d_i
        dA = np.zeros((n, n))
        dA[i - 1, i - 1] = 1.0
        terms.append(DerivativeTerm("d", i, gv.d[i - 1], dA))

    for j in range(1, n):  # w_j: row j of the upper part
        dA = np.zeros((n, n))
        val = 1.0
        for i in range(j, n):
            dA[j - 1, i] = (r[i - 1] if i < n - 1 else 1.0) * val
            if i < n - 1:
                val *= t[i - 1]
        terms.append(DerivativeTerm("w", j, gv.w[j - 1], dA))

    for i in range(2, n):  # u_i
        ri, ti = r[i - 2], t[i - 2]
        dA = np.zeros((n, n))
        # column i: head factor r_i; d(r_i)/du = -t r^2
        col = np.zeros(n)
        val = 1.0
        for j in range(i - 2, -1, -1):
            col[j] = w[j] * val
            if j >= 1:
                val *= t[j - 1]
        dA[:, i - 1] = (-ti * ri**2) * col
        # columns i+1..n: t_i appears once; replace it by r_i^3
        row_head = np.zeros(n)
        val = 1.0
        for j in range(i - 2, -1, -1):
            row_head[j] = w[j] * val
            if j >= 1:
                val *= t[j - 1]
        col_tail = np.zeros(n)
        val = 1.0
        for cc in range(i, n):
            col_tail[cc] = (r[cc - 1] if cc < n - 1 else 1.0) * val
            if cc < n - 1:
                val *= t[cc - 1]
        dA += (ri**3) * np.outer(row_head, col_tail)
        terms.append(DerivativeTerm("u", i, gv.u[i - 2], dA))

    return terms


def qs_weighted_derivatives(qs: QsParams) -> list[DerivativeTerm]:
    """Weighted derivative terms omega * dA/domega, built from blocks of A.

    The d-terms carry the plain unit matrices e_i e_i^T; every other term
    is the parameter-weighted derivative, which equals a row, column, or
    contiguous block of the materialized matrix.
    """
    n = qs.n
    A = qs_materialize(qs)
    AL, _, AU = split_lower_diag_upper(A)
    terms: list[DerivativeTerm] = []
    for i in range(2, n + 1):
        M = np.zeros((n, n))
        M[i - 1, :] = AL[i - 1, :]
        terms.append(DerivativeTerm("p", i, qs.p[i - 2], M))
    for i in range(2, n):
        M = np.zeros((n, n))
        M[i:, : i - 1] = A[i:, : i - 1]
        terms.append(DerivativeTerm("a", i, qs.a[i - 2], M))
    for j in range(1, n):
        M = np.zeros((n, n))
        M[:, j - 1] = AL[:, j - 1]
        terms.append(DerivativeTerm("q", j, qs.q[j - 1], M))
    for i in range(1, n + 1):
        M = np.zeros((n, n))
        M[i - 1, i - 1] = 1.0
        terms.append(DerivativeTerm("d", i, qs.d[i - 1], M))
    for i in range(1, n):
        M = np.zeros((n, n))
        M[i - 1, :] = AU[i - 1, :]
        terms.append(DerivativeTerm("g", i, qs.g[i - 1], M))
    for i in range(2, n):
        M = np.zeros((n, n))
        M[: i - 1, i:] = A[: i - 1, i:]
        terms.append(DerivativeTerm("b", i, qs.b[i - 2], M))
    for j in range(2, n + 1):
        M = np.zeros((n, n))
        M[:, j - 1] = AU[:, j - 1]
        terms.append(DerivativeTerm("h", j, qs.h[j - 2], M))
    return terms


def gv_u_weighted_variants(gv: GvTangentParams, i: int) -> dict[str, np.ndarray]:
    """Both candidate forms of the weighted u_i term, for adjudication.

    "column" places the -t_i^2 factor on column i of A only (plus the
    r_i^2 trailing block); "block" applies -t_i^2 to the whole trailing
    block A(1:i-1, i+1:n) instead of the single column.  Finite
    differences confirm the column form.
    """
    n = gv.n
    A = gv_materialize(gv)
    trig = gv_tangent_to_trig(gv)
    ti, ri = trig.t[i - 2], trig.r[i - 2]
    col = np.zeros((n, n))
    col[: i - 1, i - 1] = -(ti**2) * A[: i - 1, i - 1]
    col[: i - 1, i:] = ri**2 * A[: i - 1, i:]
    blk = np.zeros((n, n))
    blk[: i - 1, i:] = -(ti**2) * A[: i - 1, i:] + ri**2 * A[: i - 1, i:]
    return {"column": col, "block": blk}


def gv_weighted_derivatives(gv: GvTangentParams) -> list[DerivativeTerm]:
    """Weighted derivative terms for the tangent GV representation.

    The l_i term combines the -s_i^2 row and c_i^2 block of A; the u_i
    term uses the column form (see :func:`gv_u_weighted_variants`); d, v,
    w reuse the diagonal / column / row forms of the QS family.
    """
    n = gv.n
    A = gv_materialize(gv)
    AL, _, AU = split_lower_diag_upper(A)
    trig = gv_tangent_to_trig(gv)
    terms: list[DerivativeTerm] = []
    for i in range(2, n):
        si, ci = trig.s[i - 2], trig.c[i - 2]
        M = np.zeros((n, n))
        M[i - 1, : i - 1] = -(si**2) * A[i - 1, : i - 1]
        M[i:, : i - 1] = ci**2 * A[i:, : i - 1]
        terms.append(DerivativeTerm("l", i, gv.l[i - 2], M))
    for j in range(1, n):
        M = np.zeros((n, n))
        M[:, j - 1] = AL[:, j - 1]
        terms.append(DerivativeTerm("v", j, gv.v[j - 1], M))
    for i in range(1, n + 1):
        M = np.zeros((n, n))
        M[i - 1, i - 1] = 1.0
        terms.append(DerivativeTerm("d", i, gv.d[i - 1], M))
    for j in range(1, n):
        M = np.zeros((n, n))
        M[j - 1, :] = AU[j - 1, :]
        terms.append(DerivativeTerm("w", j, gv.w[j - 1], M))
    for i in range(2, n):
        terms.append(
            DerivativeTerm("u", i, gv.u[i - 2], gv_u_weighted_variants(gv, i)["column"])
        )
    return terms


def natural_term_weights(terms: list[DerivativeTerm]) -> list[float]:
    """Natural weights matching the weighted-term convention.

    Weighted terms already absorb their parameter, so their natural weight
    is 1 — except the d-terms, which are stored unweighted and need |d_i|.
    """
    return [abs(t.value) if t.family == "d" else 1.0 for t in terms]


def solution_directional_derivative(
    A: np.ndarray,
    X: np.ndarray,
    dA: np.ndarray | None = None,
    dB: np.ndarray | None = None,
) -> np.ndarray:
    """First-order change of X = A^{-1} B along (dA, dB).

    Returns A^{-1} (dB - dA X); either direction may be omitted.
    """
    rhs = np.zeros_like(X, dtype=float)
    if dA is not None:
        rhs -= dA @ X
    if dB is not None:
        rhs = rhs + dB
    return np.linalg.solve(A, rhs)
