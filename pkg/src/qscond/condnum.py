"""Componentwise condition numbers for A X = B under the max norm.

All condition numbers share the same shape: a nonnegative matrix expression
measuring the worst first-order change of X, maximized entrywise, divided
by ``max(|X|)``.  The functions range from the fully general parameterized
form down to the structured quasiseparable formulas and the effective
condition number.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .qsrep import (
    GvTangentParams,
    QsParams,
    gv_tangent_to_trig,
    gv_to_qs,
    qs_from_dense,
    qs_materialize,
    split_lower_diag_upper,
)


@dataclass
class SparseRhs:
    """Right-hand side B = Σ_k ω_k S_k with 0/1 pattern matrices S_k."""

    n: int
    m: int
    terms: list[tuple[np.ndarray, float]]

    def __post_init__(self):
        cleaned = []
        for S, omega in self.terms:
            S = np.asarray(S, dtype=float)
            if S.shape != (self.n, self.m):
                raise ValueError(f"pattern matrix has shape {S.shape}, expected {(self.n, self.m)}")
            if not np.all((S == 0.0) | (S == 1.0)):
                raise ValueError("pattern matrices must have entries in {0, 1}")
            cleaned.append((S, float(omega)))
        self.terms = cleaned

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def materialize(self) -> np.ndarray:
        B = np.zeros((self.n, self.m))
        for S, omega in self.terms:
            B += omega * S
        return B

    @classmethod
    def from_dense(cls, B: np.ndarray) -> "SparseRhs":
        """Trivial expansion with one unit pattern per nonzero entry."""
        B = np.asarray(B, dtype=float)
        n, m = B.shape
        terms = []
        for i in range(n):
            for j in range(m):
                if B[i, j] != 0.0:
                    S = np.zeros((n, m))
                    S[i, j] = 1.0
                    terms.append((S, B[i, j]))
        return cls(n=n, m=m, terms=terms)


@dataclass
class WeightSpec:
    """Perturbation weights for the structured condition numbers.

    variant "natural" weights every parameter by its own magnitude (and B
    by |B|).  variant "explicit" supplies per-family weight vectors in
    ``e`` (keys matching the parameter families, e.g. "p", "a", ... or
    "l", "v", ...), an entrywise matrix weight ``F`` for a dense RHS, or a
    per-term vector ``f`` for a sparse RHS.
    """

    variant: str = "natural"
    e: dict[str, np.ndarray] = field(default_factory=dict)
    F: np.ndarray | None = None
    f: np.ndarray | None = None

    def __post_init__(self):
        if self.variant not in ("natural", "explicit"):
            raise ValueError(f"unknown weight variant {self.variant!r}")

    @property
    def natural(self) -> bool:
        return self.variant == "natural"


@dataclass
class CondReport:
    """Bundle of condition numbers for one system, with metadata.

    ``k_unstructured`` is the dense entrywise value; when the RHS is
    sparse, ``k_unstructured_sparse`` additionally restricts the RHS
    perturbation to the sparsity pattern.  ``ratio`` is the headline
    unstructured-over-effective quotient (using the sparse-aware
    unstructured value when one exists).
    """

    n: int
    m: int
    rhs_mode: str
    k_unstructured: float
    k_eff: float
    k_qs: float
    k_unstructured_sparse: float | None = None
    k_gv: float | None = None
    seed: int | None = None
    rho: float | None = None

    @property
    def ratio(self) -> float:
        k_u = self.k_unstructured_sparse if self.k_unstructured_sparse is not None else self.k_unstructured
        return k_u / self.k_eff

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n,
            "m": self.m,
            "rhs_mode": self.rhs_mode,
            "k_unstructured": self.k_unstructured,
            "k_eff": self.k_eff,
            "k_qs": self.k_qs,
            "ratio": self.ratio,
        }
        if self.k_unstructured_sparse is not None:
            out["k_unstructured_sparse"] = self.k_unstructured_sparse
        if self.k_gv is not None:
            out["k_gv"] = self.k_gv
        if self.seed is not None:
            out["seed"] = self.seed
        if self.rho is not None:
            out["rho"] = self.rho
        return out

    def to_csv_row(self) -> str:
        k_u = self.k_unstructured_sparse if self.k_unstructured_sparse is not None else self.k_unstructured
        fields = [
            str(self.n),
            str(self.m),
            "" if self.rho is None else repr(self.rho),
            "" if self.seed is None else str(self.seed),
            repr(k_u),
            repr(self.k_eff),
            repr(self.k_qs),
            "" if self.k_gv is None else repr(self.k_gv),
            repr(self.ratio),
        ]
        return ",".join(fields)


CSV_HEADER = "n,m,rho,seed,k_unstructured,k_eff,k_qs,k_gv,ratio"


def _mx(M: np.ndarray) -> float:
    return float(np.max(np.abs(M)))


def matrix_inverse(A: np.ndarray) -> np.ndarray:
    """Dense inverse via LU with partial pivoting; rejects singular input.

    The matrix is first equilibrated by iterated two-sided diagonal
    scaling (Ruiz iteration on max-norms), the scaled copy is factored,
    and the scalings are undone on the inverse.  The experiment
    generator deliberately produces matrices whose entries span dozens
    of orders of magnitude; their ill-conditioning is largely diagonal
    scaling, so factoring the equilibrated copy keeps the inverse
    accurate enough for the condition-number quotients while computing
    exactly the same mathematical object.

    Singularity is flagged structurally: a zero row or column, an
    exactly zero pivot, or nonfinite entries in the factorization or
    inverse.  A magnitude threshold on pivots is deliberately avoided
    because the ill-scaled experiment matrices sit far beyond any
    eps-relative cutoff while exactly singular inputs still produce
    zero pivots.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    scaled = A.copy()
    row = np.ones(n)
    col = np.ones(n)
    for _ in range(50):
        rmax = np.max(np.abs(scaled), axis=1)
        cmax = np.max(np.abs(scaled), axis=0)
        if np.any(rmax == 0.0) or np.any(cmax == 0.0):
            raise ValueError("singular coefficient matrix")
        if np.max(rmax) <= 2.0 and np.min(rmax) >= 0.5 and np.max(cmax) <= 2.0 and np.min(cmax) >= 0.5:
            break
        dr = 1.0 / np.sqrt(rmax)
        scaled *= dr[:, None]
        row *= dr
        dc = 1.0 / np.sqrt(np.max(np.abs(scaled), axis=0))
        scaled *= dc[None, :]
        col *= dc
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(scaled, check_finite=False)
    if np.any(np.diag(lu) == 0.0) or not np.all(np.isfinite(lu)):
        raise ValueError("singular coefficient matrix")
    scaled_inverse = scipy.linalg.lu_solve((lu, piv), np.eye(n), check_finite=False)
    if not np.all(np.isfinite(scaled_inverse)):
        raise ValueError("singular coefficient matrix")
    # (R A C)^-1 = C^-1 A^-1 R^-1, so A^-1 = C (R A C)^-1 R.
    return (col[:, None] * scaled_inverse) * row[None, :]


def _check_x(X: np.ndarray) -> float:
    norm = _mx(X)
    if norm == 0.0:
        raise ValueError("zero solution")
    return norm


def _ratio_vector(weights: np.ndarray | None, params: np.ndarray, natural: bool, family: str) -> np.ndarray:
    """|e_k / omega_k| with the zero-parameter conventions.

    Natural mode: the ratio is identically 1, including at omega = 0.
    Explicit mode: 0 when both weight and parameter vanish, error when the
    weight is nonzero but the parameter is 0.
    """
    if natural:
        return np.ones_like(params)
    if weights is None:
        raise ValueError(f"explicit weights missing for parameter family {family!r}")
    weights = np.asarray(weights, dtype=float)
    if weights.shape != params.shape:
        raise ValueError(f"weight vector for {family!r} has wrong length")
    out = np.zeros_like(params)
    for k in range(params.size):
        if params[k] == 0.0:
            if weights[k] != 0.0:
                raise ValueError(f"weighted ratio undefined: {family}_{k} = 0 with nonzero weight")
            out[k] = 0.0
        else:
            out[k] = abs(weights[k] / params[k])
    return out


def _rhs_term(Ainv: np.ndarray, rhs, weights: WeightSpec) -> np.ndarray:
    """The RHS contribution: Σ_k |A⁻¹ S_k| f_k, or |A⁻¹| F for dense B."""
    if isinstance(rhs, SparseRhs):
        if weights.natural:
            f = np.array([abs(omega) for _, omega in rhs.terms])
        else:
            if weights.f is None:
                raise ValueError("explicit weights missing for sparse RHS")
            f = np.asarray(weights.f, dtype=float)
            if f.size != rhs.num_terms:
                raise ValueError("RHS weight vector length mismatch")
        total = np.zeros((Ainv.shape[0], rhs.m))
        for (S, _), fk in zip(rhs.terms, f):
            total += np.abs(Ainv @ S) * fk
        return total
    B = np.asarray(rhs, dtype=float)
    F = np.abs(B) if weights.natural else np.asarray(weights.F, dtype=float)
    if F is None or F.shape != B.shape:
        raise ValueError("dense RHS weight matrix missing or mismatched")
    return np.abs(Ainv) @ F


def cond_unstructured(A, B, X, E=None, F=None) -> float:
    """Entrywise condition number for perturbations of every entry of A, B.

    Returns ``max(|A⁻¹| E |X| + |A⁻¹| F) / max|X|``; ``E`` defaults to
    |A| and ``F`` to |B| (the natural entrywise weights).
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    X = np.asarray(X, dtype=float)
    norm = _check_x(X)
    Ainv = matrix_inverse(A)
    E = np.abs(A) if E is None else np.asarray(E, dtype=float)
    F = np.abs(B) if F is None else np.asarray(F, dtype=float)
    return _mx(np.abs(Ainv) @ E @ np.abs(X) + np.abs(Ainv) @ F) / norm


def cond_param_general(
    A,
    X,
    dA_terms: Sequence[np.ndarray],
    dB_terms: Sequence[np.ndarray],
    e: Sequence[float],
    f: Sequence[float],
    n_shared: int = 0,
) -> float:
    """Condition number for a general shared parameterization of (A, B).

    The first ``n_shared`` parameters perturb both A and B; ``dA_terms``
    lists all N derivatives of A (shared first), ``dB_terms`` all M
    derivatives of B (shared first).  ``e`` has length N and weights the
    A-side parameters, ``f`` has length M and weights the B-only tail
    (its first ``n_shared`` entries are ignored).
    """
    A = np.asarray(A, dtype=float)
    X = np.asarray(X, dtype=float)
    norm = _check_x(X)
    Ainv = matrix_inverse(A)
    N, M = len(dA_terms), len(dB_terms)
    if len(e) != N or len(f) != M:
        raise ValueError("weight vector length does not match derivative provider count")
    if n_shared > min(N, M):
        raise ValueError("shared prefix exceeds derivative provider count")
    total = np.zeros_like(X, dtype=float)
    for k in range(n_shared):
        total += np.abs(Ainv @ dA_terms[k] @ X - Ainv @ dB_terms[k]) * e[k]
    for k in range(n_shared, N):
        total += np.abs(Ainv @ dA_terms[k] @ X) * e[k]
    for k in range(n_shared, M):
        total += np.abs(Ainv @ dB_terms[k]) * f[k]
    return _mx(total) / norm


def cond_param_denseB(A, X, dA_terms: Sequence[np.ndarray], e: Sequence[float], F) -> float:
    """Parameterized A with a dense, independently perturbed B."""
    A = np.asarray(A, dtype=float)
    X = np.asarray(X, dtype=float)
    norm = _check_x(X)
    Ainv = matrix_inverse(A)
    if len(e) != len(dA_terms):
        raise ValueError("weight vector length does not match derivative provider count")
    total = np.abs(Ainv) @ np.asarray(F, dtype=float)
    for dA, ek in zip(dA_terms, e):
        total += np.abs(Ainv @ dA @ X) * ek
    return _mx(total) / norm


def cond_param_sparseB(A, X, dA_terms: Sequence[np.ndarray], e: Sequence[float], rhs: SparseRhs, f: Sequence[float]) -> float:
    """Parameterized A with a sparse B = Σ ω_k S_k, so ∂B/∂ω_k = S_k."""
    A = np.asarray(A, dtype=float)
    X = np.asarray(X, dtype=float)
    norm = _check_x(X)
    Ainv = matrix_inverse(A)
    if len(e) != len(dA_terms):
        raise ValueError("weight vector length does not match derivative provider count")
    if len(f) != rhs.num_terms:
        raise ValueError("RHS weight vector length mismatch")
    total = np.zeros_like(X, dtype=float)
    for dA, ek in zip(dA_terms, e):
        total += np.abs(Ainv @ dA @ X) * ek
    for (S, _), fk in zip(rhs.terms, f):
        total += np.abs(Ainv @ S) * fk
    return _mx(total) / norm


def cond_unstructuredA_sparseB(A, X, rhs: SparseRhs, E=None, f=None) -> float:
    """Entrywise perturbations of A combined with a sparse RHS pattern.

    Natural weights (the defaults) use E = |A| and f_k = |ω_k|.
    """
    A = np.asarray(A, dtype=float)
    X = np.asarray(X, dtype=float)
    norm = _check_x(X)
    Ainv = matrix_inverse(A)
    E = np.abs(A) if E is None else np.asarray(E, dtype=float)
    if f is None:
        f = [abs(omega) for _, omega in rhs.terms]
    if len(f) != rhs.num_terms:
        raise ValueError("RHS weight vector length mismatch")
    total = np.abs(Ainv) @ E @ np.abs(X)
    for (S, _), fk in zip(rhs.terms, f):
        total += np.abs(Ainv @ S) * fk
    return _mx(total) / norm


def cond_qs(params: QsParams, rhs, X, weights: WeightSpec | None = None) -> float:
    """Structured condition number over the generator representation.

    Evaluates the grouped expression term by term: RHS contribution,
    diagonal, the four generator-vector terms through the weight diagonals
    D_p, D_q, D_g, D_h, and one block term per transfer coefficient a_i,
    b_i scaled by the weight/parameter ratio.  With natural weights the
    diagonals collapse to the identity (D_d to |A_D|) and every ratio is 1.
    """
    weights = weights or WeightSpec()
    X = np.asarray(X, dtype=float)
    norm = _check_x(X)
    n = params.n
    A = qs_materialize(params)
    Ainv = matrix_inverse(A)
    AL, AD, AU = split_lower_diag_upper(A)
    absAinv = np.abs(Ainv)

    total = _rhs_term(Ainv, rhs, weights)

    if weights.natural:
        Dd = np.abs(params.d)
    else:
        ed = weights.e.get("d")
        if ed is None:
            raise ValueError("explicit weights missing for parameter family 'd'")
        Dd = np.asarray(ed, dtype=float)
    total += absAinv @ (Dd[:, None] * np.abs(X))

    natural = weights.natural
    # D_p = diag(1, |e_p/p|_{2..n}); the leading 1 reflects that row 1 has
    # no lower part.
    Dp = np.ones(n)
    Dp[1:] = _ratio_vector(weights.e.get("p"), params.p, natural, "p")
    total += absAinv @ (Dp[:, None] * np.abs(AL @ X))

    Dq = np.ones(n)
    Dq[: n - 1] = _ratio_vector(weights.e.get("q"), params.q, natural, "q")
    total += np.abs(Ainv @ AL) @ (Dq[:, None] * np.abs(X))

    Dg = np.ones(n)
    Dg[: n - 1] = _ratio_vector(weights.e.get("g"), params.g, natural, "g")
    total += absAinv @ (Dg[:, None] * np.abs(AU @ X))

    Dh = np.ones(n)
    Dh[1:] = _ratio_vector(weights.e.get("h"), params.h, natural, "h")
    total += np.abs(Ainv @ AU) @ (Dh[:, None] * np.abs(X))

    ra = _ratio_vector(weights.e.get("a"), params.a, natural, "a")
    rb = _ratio_vector(weights.e.get("b"), params.b, natural, "b")
    for i in range(2, n):  # one-based transfer index
        if ra[i - 2] != 0.0:
            Ba = np.zeros((n, n))
            Ba[i:, : i - 1] = A[i:, : i - 1]
            total += np.abs(Ainv @ Ba @ X) * ra[i - 2]
        if rb[i - 2] != 0.0:
            Bb = np.zeros((n, n))
            Bb[: i - 1, i:] = A[: i - 1, i:]
            total += np.abs(Ainv @ Bb @ X) * rb[i - 2]
    return _mx(total) / norm


def cond_gv(params: GvTangentParams, rhs, X, weights: WeightSpec | None = None) -> float:
    """Structured condition number over the tangent GV representation."""
    weights = weights or WeightSpec()
    X = np.asarray(X, dtype=float)
    norm = _check_x(X)
    n = params.n
    if n < 3:
        raise ValueError("GV condition number requires order at least 3")
    qs = gv_to_qs(params)
    A = qs_materialize(qs)
    Ainv = matrix_inverse(A)
    AL, AD, AU = split_lower_diag_upper(A)
    absAinv = np.abs(Ainv)
    trig = gv_tangent_to_trig(params)

    total = _rhs_term(Ainv, rhs, weights)

    if weights.natural:
        Dd = np.abs(params.d)
    else:
        ed = weights.e.get("d")
        if ed is None:
            raise ValueError("explicit weights missing for parameter family 'd'")
        Dd = np.asarray(ed, dtype=float)
    total += absAinv @ (Dd[:, None] * np.abs(X))

    natural = weights.natural
    Dv = np.ones(n)
    Dv[: n - 1] = _ratio_vector(weights.e.get("v"), params.v, natural, "v")
    total += np.abs(Ainv @ AL) @ (Dv[:, None] * np.abs(X))

    Dw = np.ones(n)
    Dw[: n - 1] = _ratio_vector(weights.e.get("w"), params.w, natural, "w")
    total += absAinv @ (Dw[:, None] * np.abs(AU @ X))

    rl = _ratio_vector(weights.e.get("l"), params.l, natural, "l")
    ru = _ratio_vector(weights.e.get("u"), params.u, natural, "u")
    s, t = trig.s, trig.t
    for i in range(2, n):  # one-based rotation index
        if rl[i - 2] != 0.0:
            M = np.zeros((n, n))
            M[i - 1, : i - 1] = -s[i - 2] ** 2 * A[i - 1, : i - 1]
            M[i:, : i - 1] = (1.0 - s[i - 2] ** 2) * A[i:, : i - 1]
            total += np.abs(Ainv @ M @ X) * rl[i - 2]
        if ru[i - 2] != 0.0:
            M = np.zeros((n, n))
            M[: i - 1, i - 1] = -t[i - 2] ** 2 * A[: i - 1, i - 1]
            M[: i - 1, i:] = (1.0 - t[i - 2] ** 2) * A[: i - 1, i:]
            total += np.abs(Ainv @ M @ X) * ru[i - 2]
    return _mx(total) / norm


def cond_eff(params: QsParams, rhs, X) -> float:
    """Effective condition number: structure-aware but parameter-free.

    Uses only the materialized matrix and the RHS pattern; a dense RHS is
    expanded to the trivial one-pattern-per-entry sparse form, which makes
    its contribution collapse to |A⁻¹||B|.
    """
    X = np.asarray(X, dtype=float)
    norm = _check_x(X)
    A = qs_materialize(params)
    Ainv = matrix_inverse(A)
    AL, AD, AU = split_lower_diag_upper(A)
    absAinv = np.abs(Ainv)
    if not isinstance(rhs, SparseRhs):
        rhs = SparseRhs.from_dense(np.asarray(rhs, dtype=float))
    total = np.zeros_like(X, dtype=float)
    for S, omega in rhs.terms:
        total += np.abs(Ainv @ S) * abs(omega)
    total += absAinv @ (np.abs(np.diag(AD))[:, None] * np.abs(X))
    total += absAinv @ np.abs(AL @ X)
    total += np.abs(Ainv @ AL) @ np.abs(X)
    total += absAinv @ np.abs(AU @ X)
    total += np.abs(Ainv @ AU) @ np.abs(X)
    return _mx(total) / norm


def cond_report(source, rhs, X=None, seed=None, rho=None) -> CondReport:
    """Compute every applicable natural-weight condition number.

    ``source`` may be QS parameters, GV parameters, or a dense matrix
    recognizable as {1;1}-quasiseparable.  If X is omitted it is solved
    from the materialized system.
    """
    gv = None
    if isinstance(source, GvTangentParams):
        gv = source
        qs = gv_to_qs(source)
    elif isinstance(source, QsParams):
        qs = source
    else:
        qs = qs_from_dense(np.asarray(source, dtype=float))
    A = qs_materialize(qs)
    n = qs.n

    if isinstance(rhs, SparseRhs):
        B = rhs.materialize()
        rhs_mode = "sparse"
    else:
        B = np.asarray(rhs, dtype=float)
        rhs_mode = "dense"
    if B.ndim == 1:
        B = B[:, None]
    m = B.shape[1]

    if X is None:
        Ainv = matrix_inverse(A)  # singularity check before solving
        X = np.linalg.solve(A, B)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]

    k_unstr = cond_unstructured(A, B, X)
    k_unstr_sparse = None
    if rhs_mode == "sparse":
        k_unstr_sparse = cond_unstructuredA_sparseB(A, X, rhs)
    k_qs = cond_qs(qs, rhs, X)
    k_eff = cond_eff(qs, rhs, X)
    k_gv = cond_gv(gv, rhs, X) if gv is not None else None
    return CondReport(
        n=n,
        m=m,
        rhs_mode=rhs_mode,
        k_unstructured=k_unstr,
        k_unstructured_sparse=k_unstr_sparse,
        k_qs=k_qs,
        k_eff=k_eff,
        k_gv=k_gv,
        seed=seed,
        rho=rho,
    )
