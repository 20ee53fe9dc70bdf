"""Quasiseparable matrix representations.

Two parametrizations of {1;1}-quasiseparable matrices are supported: the
general quasiseparable ("QS") generator representation and the
tangent-based Givens-vector ("GV") representation.  Parameter vectors are
stored zero-based; the docstrings note the one-based index ranges used in
the accompanying JSON schema.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class QsParams:
    """Generator representation of an n-by-n {1;1}-quasiseparable matrix.

    Index conventions (one-based, as in the JSON schema):
      p: i = 2..n      lower generators, length n-1
      a: i = 2..n-1    lower transfer coefficients, length n-2
      q: j = 1..n-1    lower generators, length n-1
      d: i = 1..n      diagonal, length n
      g: i = 1..n-1    upper generators, length n-1
      b: i = 2..n-1    upper transfer coefficients, length n-2
      h: j = 2..n      upper generators, length n-1

    Entry (i, j) with i > j is p_i * a_{i-1} * ... * a_{j+1} * q_j, the
    diagonal is d_i, and entry (i, j) with i < j is
    g_i * b_{i+1} * ... * b_{j-1} * h_j.
    """

    p: np.ndarray
    a: np.ndarray
    q: np.ndarray
    d: np.ndarray
    g: np.ndarray
    b: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        self.p = np.atleast_1d(np.asarray(self.p, dtype=float))
        self.a = np.atleast_1d(np.asarray(self.a, dtype=float))
        self.q = np.atleast_1d(np.asarray(self.q, dtype=float))
        self.d = np.atleast_1d(np.asarray(self.d, dtype=float))
        self.g = np.atleast_1d(np.asarray(self.g, dtype=float))
        self.b = np.atleast_1d(np.asarray(self.b, dtype=float))
        self.h = np.atleast_1d(np.asarray(self.h, dtype=float))
        n = self.d.size
        if n < 2:
            raise ValueError("order must be at least 2")
        expected = {
            "p": n - 1,
            "a": n - 2,
            "q": n - 1,
            "g": n - 1,
            "b": n - 2,
            "h": n - 1,
        }
        for name, size in expected.items():
            got = getattr(self, name).size
            if got != size:
                raise ValueError(
                    f"parameter vector {name!r} has length {got}, expected {size} for n={n}"
                )

    @property
    def n(self) -> int:
        return self.d.size

    def copy(self) -> "QsParams":
        return QsParams(*(getattr(self, f).copy() for f in "paqdgbh"))

    def flat(self) -> np.ndarray:
        """All 7n-8 parameters as one vector, in p, a, q, d, g, b, h order."""
        return np.concatenate([getattr(self, f) for f in "paqdgbh"])


@dataclass
class GvTangentParams:
    """Tangent-based Givens-vector representation, 5n-6 parameters.

    One-based index ranges:
      l: i = 2..n-1   lower rotation tangents, length n-2
      v: j = 1..n-1   lower vector, length n-1
      d: i = 1..n     diagonal, length n
      w: j = 1..n-1   upper vector, length n-1
      u: i = 2..n-1   upper rotation tangents, length n-2
    """

    l: np.ndarray
    v: np.ndarray
    d: np.ndarray
    w: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        for f in "lvdwu":
            setattr(self, f, np.atleast_1d(np.asarray(getattr(self, f), dtype=float)))
        n = self.d.size
        if n < 3:
            raise ValueError("GV representation requires order at least 3")
        for name, size in (("l", n - 2), ("v", n - 1), ("w", n - 1), ("u", n - 2)):
            got = getattr(self, name).size
            if got != size:
                raise ValueError(
                    f"parameter vector {name!r} has length {got}, expected {size} for n={n}"
                )

    @property
    def n(self) -> int:
        return self.d.size

    def copy(self) -> "GvTangentParams":
        return GvTangentParams(*(getattr(self, f).copy() for f in "lvdwu"))

    def flat(self) -> np.ndarray:
        """All 5n-6 parameters as one vector, in l, v, d, w, u order."""
        return np.concatenate([getattr(self, f) for f in "lvdwu"])


@dataclass
class GvTrigParams:
    """Cosine/sine form of the Givens-vector representation.

    c, s are the cosines/sines of the lower rotations (index 2..n-1) and
    r, t the cosines/sines of the upper rotations (index 2..n-1).
    """

    c: np.ndarray
    s: np.ndarray
    v: np.ndarray
    d: np.ndarray
    w: np.ndarray
    r: np.ndarray
    t: np.ndarray


def gv_tangent_to_trig(gv: GvTangentParams) -> GvTrigParams:
    """Convert tangents to cosine/sine pairs: c = 1/sqrt(1+l^2), s = l*c."""
    c = 1.0 / np.sqrt(1.0 + gv.l**2)
    s = gv.l * c
    r = 1.0 / np.sqrt(1.0 + gv.u**2)
    t = gv.u * r
    return GvTrigParams(c=c, s=s, v=gv.v.copy(), d=gv.d.copy(), w=gv.w.copy(), r=r, t=t)


def qs_materialize(qs: QsParams) -> np.ndarray:
    """Assemble the dense n-by-n matrix from its generator representation."""
    n = qs.n
    p, a, q, d, g, b, h = qs.p, qs.a, qs.q, qs.d, qs.g, qs.b, qs.h
    A = np.zeros((n, n))
    np.fill_diagonal(A, d)
    # Lower triangle: walk each row i leftwards, accumulating the a-product.
    for i in range(1, n):
        val = p[i - 1]
        for j in range(i - 1, -1, -1):
            A[i, j] = val * q[j]
            if j >= 1:
                val *= a[j - 1]
    # Upper triangle: walk each column j upwards, accumulating the b-product.
    for j in range(1, n):
        val = h[j - 1]
        for i in range(j - 1, -1, -1):
            A[i, j] = g[i] * val
            if i >= 1:
                val *= b[i - 1]
    return A


def gv_to_qs(gv: GvTangentParams) -> QsParams:
    """Embed a GV representation into the generator representation.

    The lower generators become p_i = c_i for i = 2..n-1, p_n = 1,
    a_i = s_i, q_j = v_j; the upper part maps symmetrically with
    h_i = r_i for i = 2..n-1, h_n = 1, b_i = t_i, g_j = w_j.
    """
    trig = gv_tangent_to_trig(gv)
    n = gv.n
    p = np.ones(n - 1)
    p[: n - 2] = trig.c
    h = np.ones(n - 1)
    h[: n - 2] = trig.r
    return QsParams(
        p=p,
        a=trig.s.copy(),
        q=gv.v.copy(),
        d=gv.d.copy(),
        g=gv.w.copy(),
        b=trig.t.copy(),
        h=h,
    )


def gv_materialize(gv: GvTangentParams) -> np.ndarray:
    """Assemble the dense matrix directly from the GV representation.

    Independent of :func:`gv_to_qs`: entries are built from the
    cosine/sine recurrences, so the two routes can be cross-checked.
    """
    trig = gv_tangent_to_trig(gv)
    n = gv.n
    c, s, v, d, w, r, t = trig.c, trig.s, trig.v, trig.d, trig.w, trig.r, trig.t
    A = np.zeros((n, n))
    np.fill_diagonal(A, d)
    for i in range(1, n):
        # head factor c_i for rows 2..n-1, none for the last row
        val = c[i - 1] if i < n - 1 else 1.0
        for j in range(i - 1, -1, -1):
            A[i, j] = val * v[j]
            if j >= 1:
                val *= s[j - 1]
    for j in range(1, n):
        val = r[j - 1] if j < n - 1 else 1.0
        for i in range(j - 1, -1, -1):
            A[i, j] = w[i] * val
            if i >= 1:
                val *= t[i - 1]
    return A


def qs_matvec(qs: QsParams, x: np.ndarray) -> np.ndarray:
    """Multiply the represented matrix by a vector in O(n) time.

    Uses one ascending sweep for the lower triangle,
    sigma_j = a_j sigma_{j-1} + q_j x_j, and one descending sweep for the
    upper triangle, tau_j = b_j tau_{j+1} + h_j x_j.
    """
    x = np.asarray(x, dtype=float)
    n = qs.n
    if x.shape[0] != n:
        raise ValueError(f"vector length {x.shape[0]} does not match order {n}")
    p, a, q, d, g, b, h = qs.p, qs.a, qs.q, qs.d, qs.g, qs.b, qs.h
    y = d * x
    sigma = q[0] * x[0]
    for i in range(1, n):
        y[i] += p[i - 1] * sigma
        if i < n - 1:
            sigma = a[i - 1] * sigma + q[i] * x[i]
    tau = h[n - 2] * x[n - 1]
    for i in range(n - 2, -1, -1):
        y[i] += g[i] * tau
        if i > 0:
            tau = b[i - 1] * tau + h[i - 1] * x[i]
    return y


def qs_from_dense(A: np.ndarray, tol: float = 1e-10) -> QsParams:
    """Recover a generator representation from a dense matrix.

    Uses the normalization p_i = 1, h_j = 1, so q_j = A(j+1, j),
    a_i = A(i+1, i-1) / A(i, i-1), g_i = A(i, i+1) and
    b_i = A(i-1, i+1) / A(i-1, i).  Requires the first sub- and
    superdiagonals to be nonzero; raises if a generator chain is broken or
    the reconstruction residual exceeds ``tol`` relative to the largest
    entry of ``A``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    n = A.shape[0]
    if n < 2:
        raise ValueError("order must be at least 2")
    sub = np.diag(A, -1)
    sup = np.diag(A, 1)
    if np.any(sub == 0.0) or np.any(sup == 0.0):
        raise ValueError("generator chain broken: zero on a first off-diagonal")
    d = np.diag(A).copy()
    p = np.ones(n - 1)
    q = sub.copy()
    a = A[np.arange(2, n), np.arange(n - 2)] / A[np.arange(1, n - 1), np.arange(n - 2)]
    h = np.ones(n - 1)
    g = sup.copy()
    b = A[np.arange(n - 2), np.arange(2, n)] / A[np.arange(n - 2), np.arange(1, n - 1)]
    qs = QsParams(p=p, a=a, q=q, d=d, g=g, b=b, h=h)
    scale = np.max(np.abs(A))
    resid = np.max(np.abs(qs_materialize(qs) - A))
    if resid > tol * max(scale, 1.0):
        raise ValueError(
            "matrix is not {1;1}-quasiseparable: "
            f"reconstruction residual {resid:.3e} exceeds tolerance"
        )
    return qs


def split_lower_diag_upper(A: np.ndarray):
    """Return (A_L, A_D, A_U): strictly lower, diagonal, strictly upper parts."""
    A = np.asarray(A, dtype=float)
    return np.tril(A, -1), np.diag(np.diag(A)), np.triu(A, 1)
