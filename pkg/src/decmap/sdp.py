"""Small dense linear-matrix-inequality solver with certificates.

Problems are block pencil programs

    minimize  c . y   subject to   F0_b + sum_i y_i F_i_b  >= 0   (each block b)

with every pencil matrix symmetric.  The engine is cvxopt's interior-point
cone solver; every answer is re-certified here by eigenvalue checks on the
returned slacks, and the duality gap is reported alongside the minimal block
eigenvalue.  Answers are deterministic for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from cvxopt import matrix as _cvxmat
from cvxopt import solvers as _solvers

from . import mat
from .errors import ValidationError

__all__ = ["SdpProblem", "SdpSolution", "solve", "lambda_max_problem",
           "eliminate_equalities", "SymSpace", "SkewSpace"]

MAX_TOTAL_BLOCK_SIZE = 512

# certification thresholds for an "optimal" verdict
CERT_EIG = 1e-8
CERT_GAP = 1e-7


@dataclass(frozen=True)
class SdpProblem:
    """objective c (length k) and blocks of stacked pencils, each (k+1, s, s)."""

    objective: np.ndarray
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).reshape(-1)
        object.__setattr__(self, "objective", c)
        blocks = []
        total = 0
        for b, pencil in enumerate(self.blocks):
            pencil = np.asarray(pencil, dtype=float)
            if pencil.ndim != 3 or pencil.shape[0] != c.size + 1 or pencil.shape[1] != pencil.shape[2]:
                raise ValidationError(
                    f"block {b}: pencil must have shape (k+1, s, s) with k = {c.size}"
                )
            scale = max(1.0, float(np.abs(pencil).max()))
            asym = np.abs(pencil - np.transpose(pencil, (0, 2, 1))).max()
            if asym > 1e-12 * scale:
                raise ValidationError(f"block {b}: pencil matrices are not symmetric")
            total += pencil.shape[1]
            blocks.append(pencil)
        if total > MAX_TOTAL_BLOCK_SIZE:
            raise ValidationError(f"total block size {total} exceeds {MAX_TOTAL_BLOCK_SIZE}")
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def k(self) -> int:
        return self.objective.size


@dataclass(frozen=True)
class SdpSolution:
    y: np.ndarray
    status: str  # optimal | infeasible | indeterminate
    objective_value: float
    residuals: tuple[float, float]  # (min block eigenvalue, duality gap)

    @property
    def min_block_eig(self) -> float:
        return self.residuals[0]

    @property
    def gap(self) -> float:
        return self.residuals[1]


def lambda_max_problem(a) -> SdpProblem:
    """minimize t subject to t*I - a >= 0, the largest-eigenvalue program."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    pencil = np.stack([-mat.sym_part(a), np.eye(n)])
    return SdpProblem(np.array([1.0]), (pencil,))


def _slack_eigs(problem: SdpProblem, y: np.ndarray) -> float:
    worst = np.inf
    for pencil in problem.blocks:
        s = pencil[0] + np.tensordot(y, pencil[1:], axes=1)
        w, _ = mat.sym_eig(mat.sym_part(s))
        scale = max(1.0, float(np.abs(w).max()) if w.size else 1.0)
        worst = min(worst, w[-1] / scale)
    return float(worst)


def solve(problem: SdpProblem, tol: float = 1e-9) -> SdpSolution:
    """Solve the pencil program and certify the answer.

    Status "optimal" guarantees the returned y is feasible (minimal block
    eigenvalue >= -1e-8 relative to block scale) and the duality gap is below
    1e-7 * max(1, |objective|).  "infeasible" is backed by the solver's Farkas
    certificate; anything uncertified comes back "indeterminate" with
    residuals attached.
    """
    if not 1e-10 <= tol <= 1e-4:
        raise ValidationError(f"tol must lie in [1e-10, 1e-4], got {tol}")
    k = problem.k

    # presolve: coordinates that vanish across an entire pencil are deleted
    # (they contribute nothing but destroy strict feasibility); constant
    # blocks decide feasibility outright; variables that appear in no pencil
    # are either fixed at zero or witness unboundedness
    live_blocks = []
    for pencil in problem.blocks:
        nonzero = np.abs(pencil).max(axis=0).max(axis=1) > 0.0
        if not nonzero.all():
            keep = np.flatnonzero(nonzero)
            if keep.size == 0:
                continue
            pencil = pencil[np.ix_(np.arange(pencil.shape[0]), keep, keep)]
        if np.abs(pencil[1:]).max() == 0.0:
            w, _ = mat.sym_eig(pencil[0])
            scale = max(1.0, float(np.abs(w).max()) if w.size else 1.0)
            if w[-1] < -CERT_EIG * scale:
                return SdpSolution(np.zeros(k), "infeasible", float("inf"),
                                   (float(w[-1] / scale), float("inf")))
        else:
            live_blocks.append(pencil)

    active = np.zeros(k, dtype=bool)
    for pencil in live_blocks:
        active |= np.abs(pencil[1:]).reshape(k, -1).max(axis=1) > 0.0
    if np.any(problem.objective[~active] != 0.0):
        # unbounded direction: the objective moves along an unconstrained variable
        return SdpSolution(np.zeros(k), "indeterminate", float("nan"), (float("nan"), float("inf")))

    idx = np.flatnonzero(active)
    if idx.size == 0:
        return SdpSolution(np.zeros(k), "optimal", 0.0, (0.0, 0.0))

    c = _cvxmat(problem.objective[idx].reshape(-1, 1))
    gs, hs = [], []
    for pencil in live_blocks:
        s = pencil.shape[1]
        scale = max(1.0, float(np.abs(pencil).max()))
        g = np.empty((s * s, idx.size))
        for col, i in enumerate(idx):
            g[:, col] = (-pencil[1 + i] / scale).reshape(-1)
        gs.append(_cvxmat(g))
        hs.append(_cvxmat(pencil[0] / scale))

    def attempt(solver_tol: float, kktsolver=None):
        opts = {
            "show_progress": False,
            "maxiters": 200,
            "abstol": solver_tol,
            "reltol": solver_tol,
            "feastol": solver_tol,
        }
        saved = dict(_solvers.options)
        _solvers.options.update(opts)
        try:
            if kktsolver is None:
                return _solvers.sdp(c, Gs=gs, hs=hs)
            return _solvers.sdp(c, Gs=gs, hs=hs, kktsolver=kktsolver)
        finally:
            _solvers.options.clear()
            _solvers.options.update(saved)

    base_tol = float(np.clip(tol * 1e-1, 1e-11, 1e-7))
    sol = None
    for solver_tol, kkt in ((base_tol, None), (max(tol, 1e-9), None), (1e-7, "ldl")):
        try:
            sol = attempt(solver_tol, kkt)
        except (ValueError, ZeroDivisionError, ArithmeticError):
            sol = None
            continue
        if sol["status"] in ("optimal", "primal infeasible"):
            break
    if sol is None:
        return SdpSolution(np.zeros(k), "indeterminate", float("nan"), (float("nan"), float("inf")))

    if sol["status"] == "primal infeasible":
        return SdpSolution(np.zeros(k), "infeasible", float("inf"), (float("-inf"), float("inf")))

    if sol["x"] is None:
        return SdpSolution(np.zeros(k), "indeterminate", float("nan"), (float("nan"), float("inf")))

    y = np.zeros(k)
    y[idx] = np.asarray(sol["x"]).reshape(-1)
    objective_value = float(problem.objective @ y)
    min_eig = _slack_eigs(problem, y)
    gap = float(sol.get("gap", np.inf))
    certified = (
        sol["status"] == "optimal"
        and min_eig >= -CERT_EIG
        and gap <= CERT_GAP * max(1.0, abs(objective_value))
    )
    status = "optimal" if certified else "indeterminate"
    return SdpSolution(y, status, objective_value, (min_eig, gap))


class SymSpace:
    """Coordinates on symmetric p x p matrices (upper triangle, row-major).

    The coordinate vector v and the matrix to_matrix(v) satisfy
    to_matrix(v)[i, j] = v[index[i, j]], so a linear functional
    sum_e w_e * C[p_e, q_e] on matrices has row functional_row(p, q, w) on
    coordinates.
    """

    def __init__(self, p: int):
        self.p = p
        tri = np.triu_indices(p)
        self.tri = tri
        self.dim = tri[0].size
        index = np.empty((p, p), dtype=int)
        index[tri] = np.arange(self.dim)
        index[(tri[1], tri[0])] = index[tri]
        self.index = index

    def to_matrix(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros((self.p, self.p))
        out[self.tri] = v
        out = out + out.T
        out[np.diag_indices(self.p)] *= 0.5
        return out

    def functional_row(self, pp, qq, ww) -> np.ndarray:
        row = np.zeros(self.dim)
        np.add.at(row, self.index[np.asarray(pp), np.asarray(qq)], np.asarray(ww, dtype=float))
        return row


class SkewSpace:
    """Coordinates on skew-symmetric p x p matrices (strict upper triangle)."""

    def __init__(self, p: int):
        self.p = p
        tri = np.triu_indices(p, k=1)
        self.tri = tri
        self.dim = tri[0].size
        index = np.zeros((p, p), dtype=int)
        sign = np.zeros((p, p))
        index[tri] = np.arange(self.dim)
        sign[tri] = 1.0
        index[(tri[1], tri[0])] = index[tri]
        sign[(tri[1], tri[0])] = -1.0
        self.index = index
        self.sign = sign

    def to_matrix(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros((self.p, self.p))
        out[self.tri] = v
        return out - out.T

    def functional_row(self, pp, qq, ww) -> np.ndarray:
        pp, qq = np.asarray(pp), np.asarray(qq)
        row = np.zeros(self.dim)
        np.add.at(row, self.index[pp, qq],
                  np.asarray(ww, dtype=float) * self.sign[pp, qq])
        return row


def eliminate_equalities(e_mat: np.ndarray, rhs0: np.ndarray,
                         rhs_lin: np.ndarray | None = None,
                         rank_tol: float = 1e-11):
    """Parameterize the affine set {v : E v = rhs0 (+ t * rhs_lin)}.

    Returns (p0, p_lin, nullspace) with v = p0 + t * p_lin + N @ z, where the
    columns of N span the nullspace of E.  Raises if the system is
    inconsistent (assembly bug, not a property of the modeled map).
    """
    e_mat = np.asarray(e_mat, dtype=float)
    if e_mat.size == 0:
        d = e_mat.shape[1] if e_mat.ndim == 2 else 0
        return np.zeros(d), np.zeros(d), np.eye(d)
    u, s, vt = np.linalg.svd(e_mat, full_matrices=True)
    cutoff = rank_tol * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > cutoff))
    inv = np.zeros_like(s)
    inv[:rank] = 1.0 / s[:rank]

    def pinv_apply(b):
        return vt[: s.size].T @ (inv * (u.T @ b)[: s.size])

    p0 = pinv_apply(rhs0)
    resid = float(np.linalg.norm(e_mat @ p0 - rhs0))
    if resid > 1e-8 * max(1.0, float(np.linalg.norm(rhs0))):
        raise ValidationError(f"equality system is inconsistent (residual {resid:.3e})")
    if rhs_lin is not None:
        p_lin = pinv_apply(rhs_lin)
        resid_lin = float(np.linalg.norm(e_mat @ p_lin - rhs_lin))
        if resid_lin > 1e-8 * max(1.0, float(np.linalg.norm(rhs_lin))):
            raise ValidationError("equality system is inconsistent in the parametric part")
    else:
        p_lin = np.zeros_like(p0)
    nullspace = vt[rank:].T
    return p0, p_lin, nullspace
