"""Decomposable and completely bounded norms, Jordan/skew structure, delta bounds.

The decomposable norm of u : V -> W is the least t admitting completely
positive witnesses S1, S2 : V -> W with max(||S1(1)||, ||S2(1)||) <= t such
that x -> [[S1(x), u(x)], [u*(x), S2(x)]] is CP into M_2(W).  All programs are
posed on an ambient extension Phi : M_n -> M_{2m} through its symmetric Choi
matrix: symmetry encodes *-preservation, PSD encodes complete positivity,
corner equalities pin u (the u* corner is then automatic on a transpose-closed
basis), and range-membership equalities keep the witness corners inside the
codomain span when W is a proper subsystem.

The cb norm runs the same extension machinery on the scalar-diagonal Paulsen
system: ||u||_cb <= t exactly when the corner map with diagonal t*(aI (+) bI)
is CP.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import mat, sdp
from .cpmap import involute, is_selfadjoint, is_skew, trace_state
from .errors import DomainError, PreconditionError, SolverIndeterminate, ValidationError
from .opsys import (LinearMap, MatrixSystem, commutes_with_structures,
                    paulsen_system)

__all__ = [
    "DecResult",
    "Factorization",
    "dec_norm",
    "cb_norm",
    "complex_dec_norm",
    "jordan_split",
    "sa_difference_norm",
    "skew_witness",
    "icp_extract",
    "scp_complete",
    "stinespring_scp",
    "delta_value",
]


@dataclass(frozen=True)
class DecResult:
    """Decomposable-norm value with its witness pair and solver certificates."""

    value: float | None
    s1: LinearMap | None
    s2: LinearMap | None
    residuals: dict
    status: str  # "optimal" | "not_decomposable"
    extension_choi: np.ndarray | None = field(default=None, repr=False)

    @property
    def not_decomposable(self) -> bool:
        return self.status == "not_decomposable"


@dataclass(frozen=True)
class Factorization:
    """Pairs (a_k, b_k) with a_k b_k the images of a map out of l^inf_n."""

    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        pairs = []
        m = None
        for k, (a, b) in enumerate(self.pairs):
            a = np.asarray(a, dtype=float)
            b = np.asarray(b, dtype=float)
            if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
                raise ValidationError(f"pair {k}: inner dimensions do not match")
            if a.shape[0] != b.shape[1]:
                raise ValidationError(f"pair {k}: product is not square")
            if m is None:
                m = a.shape[0]
            elif a.shape[0] != m:
                raise ValidationError(f"pair {k}: product size differs from earlier pairs")
            pairs.append((a, b))
        object.__setattr__(self, "pairs", tuple(pairs))

    @property
    def images(self) -> tuple[np.ndarray, ...]:
        return tuple(a @ b for a, b in self.pairs)


# --------------------------------------------------------------------------
# extension-program assembly
# --------------------------------------------------------------------------

def _pair_indices(n: int):
    return np.repeat(np.arange(n), n), np.tile(np.arange(n), n)


class _BlockChoiProgram:
    """Constraint rows and pencil pieces for the Choi of Phi : M_n -> M_M.

    Entries of Phi(q) are linear functionals of the SymSpace coordinates of
    the Choi; this class assembles equality rows for prescribed sub-blocks,
    orthogonality rows against a complement, and affine pencil blocks.
    """

    def __init__(self, n: int, m_out: int):
        self.n = n
        self.m_out = m_out
        self.space = sdp.SymSpace(n * m_out)
        self._ii, self._jj = _pair_indices(n)
        self.rows: list[np.ndarray] = []
        self.rhs0: list[float] = []
        self.rhs_lin: list[float] = []

    # Phi(q)[r_off + r, c_off + s] as a functional row
    def _entry_row(self, q: np.ndarray, r: int, s: int) -> np.ndarray:
        m = self.m_out
        return self.space.functional_row(self._ii * m + r, self._jj * m + s, q.reshape(-1))

    def add_block_equality(self, q: np.ndarray, r_off: int, c_off: int,
                           target, target_lin=None, size: int | None = None):
        """Constrain the (size x size) sub-block of Phi(q) at (r_off, c_off)."""
        size = size if size is not None else (target.shape[0] if target is not None else None)
        for r in range(size):
            for s in range(size):
                self.rows.append(self._entry_row(q, r_off + r, c_off + s))
                self.rhs0.append(0.0 if target is None else float(target[r, s]))
                self.rhs_lin.append(0.0 if target_lin is None else float(target_lin[r, s]))

    def add_block_difference(self, q: np.ndarray, off_a: int, off_b: int, size: int):
        """Constrain the diagonal sub-blocks of Phi(q) at off_a and off_b to agree."""
        for r in range(size):
            for s in range(size):
                row = self._entry_row(q, off_a + r, off_a + s) - self._entry_row(q, off_b + r, off_b + s)
                self.rows.append(row)
                self.rhs0.append(0.0)
                self.rhs_lin.append(0.0)

    def add_membership(self, q: np.ndarray, r_off: int, c_off: int, complement: np.ndarray):
        """Constrain the sub-block of Phi(q) at (r_off, c_off) to be orthogonal to each complement row."""
        m = self.m_out
        size = int(np.sqrt(complement.shape[1]))
        rr = np.repeat(np.arange(size), size)
        ss = np.tile(np.arange(size), size)
        for comp in complement:
            pp = np.add.outer(self._ii * m + r_off, rr).reshape(-1)
            qq = np.add.outer(self._jj * m + c_off, ss).reshape(-1)
            ww = np.outer(q.reshape(-1), comp).reshape(-1)
            self.rows.append(self.space.functional_row(pp, qq, ww))
            self.rhs0.append(0.0)
            self.rhs_lin.append(0.0)

    def corner_of_unit_op(self, r_off: int, c_off: int, size: int) -> np.ndarray:
        """Linear operator (size^2 x dim) taking Choi coordinates to the sub-block of Phi(I)."""
        m = self.m_out
        base = np.arange(self.n) * m
        out = np.empty((size * size, self.space.dim))
        ones = np.ones(self.n)
        for r in range(size):
            for s in range(size):
                out[r * size + s] = self.space.functional_row(base + r_off + r, base + c_off + s, ones)
        return out

    def eliminate(self, parametric: bool):
        e = np.asarray(self.rows)
        rhs0 = np.asarray(self.rhs0)
        rhs_lin = np.asarray(self.rhs_lin) if parametric else None
        return sdp.eliminate_equalities(e, rhs0, rhs_lin)

    def apply_choi(self, c: np.ndarray, x: np.ndarray) -> np.ndarray:
        m = self.m_out
        return np.einsum("ij,irjs->rs", x, c.reshape(self.n, m, self.n, m))


def _choi_pencil(space: sdp.SymSpace, p0, nullspace, p_lin=None) -> np.ndarray:
    """Stack the PSD block C = mat(p0 + N z + t p_lin) as a pencil over (z..., t)."""
    q = nullspace.shape[1]
    k = q + 1
    pencil = np.empty((k + 1, space.p, space.p))
    pencil[0] = space.to_matrix(p0)
    for i in range(q):
        pencil[1 + i] = space.to_matrix(nullspace[:, i])
    pencil[k] = space.to_matrix(p_lin) if p_lin is not None else np.zeros((space.p, space.p))
    return pencil


def _norm_cap_pencil(op: np.ndarray, size: int, p0, nullspace, p_lin=None) -> np.ndarray:
    """Pencil for t*I - mat(op @ coords) >= 0 over variables (z..., t)."""
    q = nullspace.shape[1]
    k = q + 1
    pencil = np.empty((k + 1, size, size))
    pencil[0] = -(op @ p0).reshape(size, size)
    for i in range(q):
        pencil[1 + i] = -(op @ nullspace[:, i]).reshape(size, size)
    last = np.eye(size)
    if p_lin is not None:
        last = last - (op @ p_lin).reshape(size, size)
    pencil[k] = last
    return pencil


def _symmetrize_pencil(pencil: np.ndarray) -> np.ndarray:
    return 0.5 * (pencil + np.transpose(pencil, (0, 2, 1)))


def _min_t_objective(nvars: int) -> np.ndarray:
    c = np.zeros(nvars)
    c[-1] = 1.0
    return c


def _map_scale(u: LinearMap) -> float:
    return max(1.0, max(float(np.linalg.norm(x)) for x in u.images))


def _clean_restriction(domain: MatrixSystem, codomain: MatrixSystem,
                       prog: _BlockChoiProgram, c_opt: np.ndarray,
                       r_off: int, c_off: int) -> LinearMap:
    """Read a corner of the optimal extension back off as a map into the codomain."""
    m = codomain.n
    images = []
    for b in domain.basis:
        blockv = prog.apply_choi(c_opt, b)[r_off:r_off + m, c_off:c_off + m]
        images.append(codomain.project(blockv))
    return LinearMap(domain, codomain, tuple(images))


# --------------------------------------------------------------------------
# decomposable norm
# --------------------------------------------------------------------------

def dec_norm(u: LinearMap, tol: float = 1e-9) -> DecResult:
    """Decomposable norm of u with optimal witnesses, by the extension SDP.

    Minimizes t such that some extension Phi : M_n -> M_2(M_m) has a symmetric
    PSD Choi matrix, off-diagonal corners equal to u (and hence u*) on the
    domain, diagonal corners mapping the domain into the codomain span, and
    both corner values at the identity dominated by t*I.  Infeasibility means
    u is not decomposable into the given codomain.
    """
    v, w = u.domain, u.codomain
    n, m = v.n, w.n
    prog = _BlockChoiProgram(n, 2 * m)
    for q, img in zip(v.onb_mats, u.onb_images):
        prog.add_block_equality(q, 0, m, img)
        if not w.is_full:
            comp = w.complement_onb
            prog.add_membership(q, 0, 0, comp)
            prog.add_membership(q, m, m, comp)
    p0, _, nullspace = prog.eliminate(parametric=False)

    blocks = (
        _symmetrize_pencil(_choi_pencil(prog.space, p0, nullspace)),
        _symmetrize_pencil(_norm_cap_pencil(prog.corner_of_unit_op(0, 0, m), m, p0, nullspace)),
        _symmetrize_pencil(_norm_cap_pencil(prog.corner_of_unit_op(m, m, m), m, p0, nullspace)),
    )
    problem = sdp.SdpProblem(_min_t_objective(nullspace.shape[1] + 1), blocks)
    sol = sdp.solve(problem, tol=tol)

    if sol.status == "infeasible":
        return DecResult(None, None, None,
                         {"min_block_eig": sol.min_block_eig, "gap": sol.gap},
                         "not_decomposable")
    if sol.status != "optimal":
        raise SolverIndeterminate("dec program did not certify",
                                  {"min_block_eig": sol.min_block_eig, "gap": sol.gap})

    c_opt = prog.space.to_matrix(p0 + nullspace @ sol.y[:-1])
    s1 = _clean_restriction(v, w, prog, c_opt, 0, 0)
    s2 = _clean_restriction(v, w, prog, c_opt, m, m)
    value = float(sol.objective_value)
    slack = max(mat.op_norm(s1.at_identity), mat.op_norm(s2.at_identity)) - value
    residuals = {
        "min_block_eig": sol.min_block_eig,
        "gap": sol.gap,
        "witness_norm_slack": float(slack),
    }
    return DecResult(value, s1, s2, residuals, "optimal", extension_choi=c_opt)


# --------------------------------------------------------------------------
# cb norm via the scalar-diagonal Paulsen system
# --------------------------------------------------------------------------

def cb_norm(u: LinearMap, tol: float = 1e-9, certificates: dict | None = None) -> float:
    """Completely bounded norm of u by the Paulsen-system CP-extension program.

    Builds the scalar-diagonal Paulsen system on the domain basis and finds the
    least t for which the corner map (diagonal t*(aI (+) bI), upper corner u,
    lower corner the transposes) admits a CP ambient extension.  Unitality of
    the domain is never used, and only the codomain ambient matters.
    """
    v = u.domain
    n, m = v.n, u.codomain.n
    s_v = paulsen_system(list(v.basis), diag="scalar")
    d = v.dim

    # Theta images on the Paulsen user basis: constant part and t-coefficient
    m2 = 2 * m
    rhs0_user = np.zeros((s_v.dim, m2, m2))
    rhs_lin_user = np.zeros((s_v.dim, m2, m2))
    rhs_lin_user[0, :m, :m] = np.eye(m)
    rhs_lin_user[1, m:, m:] = np.eye(m)
    for k, img in enumerate(u.images):
        rhs0_user[2 + k, :m, m:] = img
        rhs0_user[2 + d + k, m:, :m] = img.T

    rhs0 = np.tensordot(s_v.onb_coeff, rhs0_user, axes=1)
    rhs_lin = np.tensordot(s_v.onb_coeff, rhs_lin_user, axes=1)

    prog = _BlockChoiProgram(s_v.n, m2)
    for q, t0, t1 in zip(s_v.onb_mats, rhs0, rhs_lin):
        prog.add_block_equality(q, 0, 0, t0, target_lin=t1, size=m2)
    p0, p_lin, nullspace = prog.eliminate(parametric=True)

    blocks = (_symmetrize_pencil(_choi_pencil(prog.space, p0, nullspace, p_lin)),)
    problem = sdp.SdpProblem(_min_t_objective(nullspace.shape[1] + 1), blocks)
    sol = sdp.solve(problem, tol=tol)
    if sol.status != "optimal":
        raise SolverIndeterminate(f"cb program ended {sol.status}",
                                  {"min_block_eig": sol.min_block_eig, "gap": sol.gap})
    if certificates is not None:
        certificates.update({"min_block_eig": sol.min_block_eig, "gap": sol.gap})
    return float(sol.objective_value)


# --------------------------------------------------------------------------
# Jordan decomposition and the selfadjoint difference program
# --------------------------------------------------------------------------

def jordan_split(u: LinearMap) -> tuple[LinearMap, LinearMap]:
    """Split u = u_sa + u_as into selfadjoint and skew parts.

    u_sa is (u + u*)/2, which is selfadjoint bit for bit.  The skew part is
    the complement u - u_sa entry by entry, refined so the parts recombine to
    u up to at most one final rounding per entry.  (Entries of mixed binade
    cannot always recombine bit-exactly: when the halves dwarf the original
    entry, Sterbenz exactness of their sum pins it to the halves' coarser
    grid, which need not contain the entry.)
    """
    ustar = involute(u)
    sa_images = []
    as_images = []
    for a, b in zip(u.images, ustar.images):
        sa = 0.5 * (a + b)
        comp = a - sa
        for _ in range(4):
            resid = a - (sa + comp)
            if not resid.any():
                break
            bumped = comp + resid
            if np.array_equal(bumped, comp):
                break
            comp = bumped
        sa_images.append(sa)
        as_images.append(comp)
    codomain = u.codomain
    u_sa = LinearMap(u.domain, codomain, tuple(sa_images))
    u_as = LinearMap(u.domain, codomain, tuple(as_images))
    return u_sa, u_as


def sa_difference_norm(u: LinearMap, tol: float = 1e-9) -> float:
    """inf ||u1 + u2|| over CP u1, u2 : V -> W with u = u1 - u2 (selfadjoint u).

    Runs an SDP over two PSD Choi matrices whose difference restricts to u on
    the domain and whose individual restrictions stay in the codomain span;
    the objective is the norm of (u1 + u2)(1) read off by partial trace.
    Agrees with dec_norm on selfadjoint maps.
    """
    if not is_selfadjoint(u):
        raise PreconditionError("sa_difference_norm needs a selfadjoint map")
    v, w = u.domain, u.codomain
    n, m = v.n, w.n
    space = sdp.SymSpace(n * m)
    dsym = space.dim
    ii, jj = _pair_indices(n)

    rows, rhs = [], []
    comp = None if w.is_full else w.complement_onb
    for q, img in zip(v.onb_mats, u.onb_images):
        wts = q.reshape(-1)
        for r in range(m):
            for s in range(m):
                half = space.functional_row(ii * m + r, jj * m + s, wts)
                rows.append(np.concatenate([half, -half]))
                rhs.append(img[r, s])
        if comp is not None:
            rr = np.repeat(np.arange(m), m)
            ss = np.tile(np.arange(m), m)
            for cvec in comp:
                pp = np.add.outer(ii * m, rr).reshape(-1)
                qq = np.add.outer(jj * m, ss).reshape(-1)
                ww = np.outer(wts, cvec).reshape(-1)
                half = space.functional_row(pp, qq, ww)
                rows.append(np.concatenate([half, np.zeros(dsym)]))
                rhs.append(0.0)
                rows.append(np.concatenate([np.zeros(dsym), half]))
                rhs.append(0.0)

    p0, _, nullspace = sdp.eliminate_equalities(np.asarray(rows), np.asarray(rhs))
    nz = nullspace.shape[1]
    k = nz + 1

    def seg_pencil(offset):
        pencil = np.empty((k + 1, space.p, space.p))
        pencil[0] = space.to_matrix(p0[offset:offset + dsym])
        for i in range(nz):
            pencil[1 + i] = space.to_matrix(nullspace[offset:offset + dsym, i])
        pencil[k] = np.zeros((space.p, space.p))
        return _symmetrize_pencil(pencil)

    # t*I - partial_trace(J1 + J2) >= 0
    base = np.arange(n) * m
    ones = np.ones(n)
    pt_op = np.empty((m * m, 2 * dsym))
    for r in range(m):
        for s in range(m):
            half = space.functional_row(base + r, base + s, ones)
            pt_op[r * m + s] = np.concatenate([half, half])
    cap = np.empty((k + 1, m, m))
    cap[0] = -(pt_op @ p0).reshape(m, m)
    for i in range(nz):
        cap[1 + i] = -(pt_op @ nullspace[:, i]).reshape(m, m)
    cap[k] = np.eye(m)

    blocks = (seg_pencil(0), seg_pencil(dsym), _symmetrize_pencil(cap))
    sol = sdp.solve(sdp.SdpProblem(_min_t_objective(k), blocks), tol=tol)
    if sol.status != "optimal":
        raise SolverIndeterminate(f"sa-difference program ended {sol.status}",
                                  {"min_block_eig": sol.min_block_eig, "gap": sol.gap})
    return float(sol.objective_value)


# --------------------------------------------------------------------------
# skew maps: single-witness program, completions, Stinespring form
# --------------------------------------------------------------------------

def _skew_program(u: LinearMap, tol: float):
    """Minimize ||s(1)|| over CP s with x -> [[s(x), -u(x)], [u(x), s(x)]] CP."""
    v, w = u.domain, u.codomain
    m = w.n
    prog = _BlockChoiProgram(v.n, 2 * m)
    for q, img in zip(v.onb_mats, u.onb_images):
        prog.add_block_equality(q, 0, m, -img)
        prog.add_block_difference(q, 0, m, m)
        if not w.is_full:
            prog.add_membership(q, 0, 0, w.complement_onb)
    p0, _, nullspace = prog.eliminate(parametric=False)
    blocks = (
        _symmetrize_pencil(_choi_pencil(prog.space, p0, nullspace)),
        _symmetrize_pencil(_norm_cap_pencil(prog.corner_of_unit_op(0, 0, m), m, p0, nullspace)),
    )
    sol = sdp.solve(sdp.SdpProblem(_min_t_objective(nullspace.shape[1] + 1), blocks), tol=tol)
    if sol.status == "infeasible":
        return None, None, sol
    if sol.status != "optimal":
        raise SolverIndeterminate(f"skew-witness program ended {sol.status}",
                                  {"min_block_eig": sol.min_block_eig, "gap": sol.gap})
    c_opt = prog.space.to_matrix(p0 + nullspace @ sol.y[:-1])
    s = _clean_restriction(v, w, prog, c_opt, 0, 0)
    return s, c_opt, sol


def skew_witness(u: LinearMap, tol: float = 1e-9, method: str = "sdp"):
    """A single CP witness s with c(s, u) CP, and its norm ||s(1)||.

    For skew u the optimum equals dec_norm(u).  method="average" instead takes
    the mean of a general witness pair from dec_norm, which is again a valid
    single witness of the same norm.
    """
    if not is_skew(u):
        raise PreconditionError("skew_witness needs a skew map (u* = -u)")
    if method == "average":
        res = dec_norm(u, tol=tol)
        if res.not_decomposable:
            raise PreconditionError("map is not decomposable")
        s = 0.5 * (res.s1 + res.s2)
        return s, mat.op_norm(s.at_identity)
    s, _, sol = _skew_program(u, tol)
    if s is None:
        raise PreconditionError("map is not decomposable")
    return s, float(sol.objective_value)


def icp_extract(phi: LinearMap, tol: float = 1e-9) -> LinearMap:
    """The imaginary part of a CP map between complexifications.

    phi must commute with the complex structures (be complex linear); the
    returned sigma satisfies phi o kappa = kappa o psi + J . kappa o sigma with
    psi the real part, is skew, and has dec norm at most ||phi(1)||.
    """
    v = phi.domain.real_form
    w = phi.codomain.real_form
    if v is None or w is None:
        raise DomainError("icp_extract needs complexified systems with known real forms")
    if not commutes_with_structures(phi, tol=max(tol, 1e-9)):
        raise DomainError("phi does not commute with the complex structures")
    m = w.n
    zero = np.zeros((v.n, v.n))
    images = []
    for b in v.basis:
        z = phi(mat.realify((b, zero)))
        images.append(z[m:2 * m, :m].copy())
    sigma = LinearMap(v, w, tuple(images))
    if not is_skew(sigma, tol=1e-8):
        raise DomainError("extracted imaginary part is not skew; phi is not CP-compatible")
    return sigma


def scp_complete(u: LinearMap, tol: float = 1e-9, unital: bool | None = None):
    """Complete a skew decomposable u to a CP block map c(s, u) with structured s.

    By default s = dec_norm(u) * (unital CP map), so that
    ||c(s(1), u(1))|| = dec_norm(u) + ||u(1)||.  When u(1) = 0 and
    dec_norm(u) <= 1 the completion is instead returned unital (s(1) = 1,
    block map unital CP), the nc-state completion.  Returns (s, norms).
    """
    if not is_skew(u):
        raise PreconditionError("scp_complete needs a skew map")
    s0, c_ext, sol = _skew_program(u, tol)
    if s0 is None:
        raise PreconditionError("map is not decomposable")
    d = float(sol.objective_value)
    unit = u.at_identity
    unit_norm = mat.op_norm(unit)
    scale = _map_scale(u)
    if unital is None:
        # the nc-state completion applies to nonzero contractions killing 1
        unital = unit_norm <= 1e-8 * scale and 1e-8 < d <= 1.0 + 1e-8
    if unital and d > 1.0 + 1e-6:
        raise PreconditionError("unital completion needs dec_norm(u) <= 1")
    target = np.eye(u.codomain.n) if unital else d * np.eye(u.codomain.n)
    pad = target - mat.sym_part(s0.at_identity)
    tau = trace_state(u.domain)
    images = tuple(x + tau(b) * pad for b, x in zip(u.domain.basis, s0.images))
    s = LinearMap(u.domain, u.codomain, images)
    block_norm = mat.op_norm(mat.realify((mat.sym_part(s.at_identity), u.at_identity)))
    norms = {
        "dec": d,
        "unit_norm": float(unit_norm),
        "block_norm": float(block_norm),
        "flavor": "unital" if unital else "scaled",
        "pad_min_eig": float(mat.min_eig(mat.sym_part(pad))),
    }
    return s, norms


def stinespring_scp(u: LinearMap, tol: float = 1e-9):
    """Stinespring-type data for a skew decomposable map into a full algebra.

    Completes u to the CP block map c(s, u), factorizes the Choi of its
    canonical extension into Kraus form, and reports ||T||^2 = ||sum K^T K||,
    which matches cb_norm(u) + ||u(1)||.  u itself is recovered from the
    lower-left corner of the reconstruction.
    """
    from .cpmap import StinespringData

    if not u.codomain.is_full:
        raise PreconditionError("stinespring_scp needs a full matrix-algebra codomain")
    if not is_skew(u):
        raise PreconditionError("stinespring_scp needs a skew map")
    s0, c_ext, sol = _skew_program(u, tol)
    if s0 is None:
        raise PreconditionError("map is not decomposable")
    d = float(sol.objective_value)
    n, m = u.domain.n, u.codomain.n
    # the scaled completion s(1) = dec * I makes ||T||^2 = dec + ||u(1)|| exact
    pad = d * np.eye(m) - mat.sym_part(s0.at_identity)
    # Choi of x -> c(tr(x)/n * pad, 0) added to the optimal extension's Choi
    c_total = mat.sym_part(c_ext) + np.kron(np.eye(n), np.kron(np.eye(2), pad)) / n
    w, q = mat.sym_eig(c_total)
    keep = w > 1e-12 * max(w[0], 1e-300)
    kraus = tuple(np.sqrt(w[i]) * q[:, i].reshape(n, 2 * m) for i in np.flatnonzero(keep))
    if not kraus:
        kraus = (np.zeros((n, 2 * m)),)
    t_norm_sq = mat.op_norm(sum(k.T @ k for k in kraus))
    tau = trace_state(u.domain)
    resid = 0.0
    for b, x in zip(u.domain.basis, u.images):
        rebuilt = sum(k.T @ b @ k for k in kraus)
        s_val = s0(b) + tau(b) * pad
        expected = mat.realify((s_val, x))
        resid = max(resid, float(np.linalg.norm(rebuilt - expected)) / max(1.0, float(np.linalg.norm(expected))))
    return StinespringData(kraus, len(kraus), float(t_norm_sq), float(resid))


# --------------------------------------------------------------------------
# the delta upper bound for maps out of l^inf_n
# --------------------------------------------------------------------------

def delta_value(f: Factorization, u: LinearMap | None = None, tol: float = 1e-9) -> float:
    """||sum a_k a_k^T||^(1/2) * ||sum b_k^T b_k||^(1/2) for a factorization.

    Any factorization of the images of u : l^inf_n -> M_m bounds dec_norm(u)
    from above; the infimum over factorizations attains it.  If u is supplied,
    consistency a_k b_k = u(e_k) is checked first.
    """
    if u is not None:
        if len(f.pairs) != u.domain.dim:
            raise ValidationError("factorization length does not match the domain dimension")
        for k, ((a, b), img) in enumerate(zip(f.pairs, u.images)):
            err = float(np.linalg.norm(a @ b - img))
            if err > max(tol, 1e-9) * max(1.0, float(np.linalg.norm(img))):
                raise ValidationError(f"pair {k} does not factor u(e_{k}) (residual {err:.3e})")
    left = sum(a @ a.T for a, _ in f.pairs)
    right = sum(b.T @ b for _, b in f.pairs)
    return float(np.sqrt(mat.op_norm(left)) * np.sqrt(mat.op_norm(right)))


# --------------------------------------------------------------------------
# native complex (Hermitian-Choi) decomposable norm, for cross-validation
# --------------------------------------------------------------------------

def complex_dec_norm(u: LinearMap, tol: float = 1e-9) -> float:
    """Decomposable norm of a complex-linear map, via the native complex program.

    u is given in realified form on complex_full(n) systems and must commute
    with the complex structures.  The program optimizes over a Hermitian Choi
    matrix H = X + iY of an extension M_n(C) -> M_2(M_m(C)); every Hermitian
    PSD constraint enters the real solver through c(X, Y).  By the identity of
    real and complex decomposability for complex-linear maps this equals
    dec_norm(u) computed on the realified systems.
    """
    vc, wc = u.domain, u.codomain
    if vc.kind not in ("complex_full", "complexified") or vc.real_form is None:
        raise DomainError("complex_dec_norm needs a complex_full domain")
    if wc.real_form is None:
        raise DomainError("complex_dec_norm needs a complex_full codomain")
    if not vc.real_form.is_full or not wc.real_form.is_full:
        raise DomainError("complex_dec_norm supports full complex matrix algebras only")
    if not commutes_with_structures(u):
        raise DomainError("map is not complex linear")
    n, m = vc.real_form.n, wc.real_form.n

    # complex images on the matrix units: u_C(E_ij) = A_ij + i B_ij
    zero = np.zeros((n, n))
    a_img = np.empty((n, n, m, m))
    b_img = np.empty((n, n, m, m))
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n)); e[i, j] = 1.0
            z = u(mat.realify((e, zero)))
            a_img[i, j] = z[:m, :m]
            b_img[i, j] = z[m:2 * m, :m]

    pc = n * 2 * m
    xs = sdp.SymSpace(pc)
    ys = sdp.SkewSpace(pc)
    dx, dy = xs.dim, ys.dim
    nvars = dx + dy

    rows, rhs = [], []
    for i in range(n):
        for j in range(n):
            for r in range(m):
                for s in range(m):
                    p_idx, q_idx = i * 2 * m + r, j * 2 * m + m + s
                    rx = xs.functional_row([p_idx], [q_idx], [1.0])
                    rows.append(np.concatenate([rx, np.zeros(dy)]))
                    rhs.append(a_img[i, j][r, s])
                    ry = ys.functional_row([p_idx], [q_idx], [1.0])
                    rows.append(np.concatenate([np.zeros(dx), ry]))
                    rhs.append(b_img[i, j][r, s])
    p0, _, nullspace = sdp.eliminate_equalities(np.asarray(rows), np.asarray(rhs))
    nz = nullspace.shape[1]
    k = nz + 1

    def herm_block(vec_to_x, vec_to_y, size):
        """Realified Hermitian block c(X, Y) for X, Y affine in the variables."""
        def build(coeffs):
            x = vec_to_x(coeffs)
            y = vec_to_y(coeffs)
            return np.kron(np.eye(2), x) + np.kron(np.array([[0.0, -1.0], [1.0, 0.0]]), y)
        return build

    # main PSD block: c(X, Y) of the Choi
    main = np.empty((k + 1, 2 * pc, 2 * pc))
    build_main = herm_block(lambda v: xs.to_matrix(v[:dx]), lambda v: ys.to_matrix(v[dx:]), pc)
    main[0] = build_main(p0)
    for i in range(nz):
        main[1 + i] = build_main(nullspace[:, i])
    main[k] = np.zeros((2 * pc, 2 * pc))

    # t-caps: realified t*I - S_a(1) for both diagonal corners
    base = np.arange(n) * 2 * m
    ones = np.ones(n)

    def cap_for(offset):
        op_x = np.empty((m * m, dx))
        op_y = np.empty((m * m, dy))
        for r in range(m):
            for s in range(m):
                op_x[r * m + s] = xs.functional_row(base + offset + r, base + offset + s, ones)
                op_y[r * m + s] = ys.functional_row(base + offset + r, base + offset + s, ones)

        def xy(vec):
            return ((op_x @ vec[:dx]).reshape(m, m), (op_y @ vec[dx:]).reshape(m, m))

        cap = np.empty((k + 1, 2 * m, 2 * m))
        x0, y0 = xy(p0)
        j2 = np.array([[0.0, -1.0], [1.0, 0.0]])
        cap[0] = -(np.kron(np.eye(2), x0) + np.kron(j2, y0))
        for i in range(nz):
            xi, yi = xy(nullspace[:, i])
            cap[1 + i] = -(np.kron(np.eye(2), xi) + np.kron(j2, yi))
        cap[k] = np.eye(2 * m)
        return cap

    blocks = (_symmetrize_pencil(main),
              _symmetrize_pencil(cap_for(0)),
              _symmetrize_pencil(cap_for(m)))
    sol = sdp.solve(sdp.SdpProblem(_min_t_objective(k), blocks), tol=tol)
    if sol.status != "optimal":
        raise SolverIndeterminate(f"complex dec program ended {sol.status}",
                                  {"min_block_eig": sol.min_block_eig, "gap": sol.gap})
    return float(sol.objective_value)
