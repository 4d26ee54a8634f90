"""Choi-matrix machinery: complete positivity, Kraus data, unitalization.

Convention: a real linear map is completely positive iff it is *-preserving
(u(x^T) = u(x)^T) and its Choi matrix is PSD.  Over the reals the involution
is not implied by positivity, so it is encoded as symmetry of the Choi matrix
and checked explicitly.  For maps whose domain is a proper subsystem the Choi
test is replaced by a CP-extension SDP; matrix-algebra codomains are injective,
so an extension exists exactly when the map is CP.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import mat, sdp
from .errors import PreconditionError, UnsupportedDomainError, ValidationError
from .opsys import LinearMap, MatrixSystem, full_real

__all__ = [
    "ChoiMatrix",
    "StinespringData",
    "CpVerdict",
    "choi",
    "map_from_choi",
    "involute",
    "is_cp",
    "kraus_stinespring",
    "normalize_ucp",
    "ucp_witnesses",
    "trace_state",
]

KRAUS_RANK_TOL = 1e-10


@dataclass(frozen=True)
class ChoiMatrix:
    """sum_ij E_ij (x) u(E_ij) for a map out of a full matrix algebra."""

    n: int
    m: int
    matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=float)
        if a.shape != (self.n * self.m, self.n * self.m):
            raise ValidationError(f"Choi matrix must be {self.n * self.m} square")
        object.__setattr__(self, "matrix", a)

    def block(self, i: int, j: int) -> np.ndarray:
        m = self.m
        return self.matrix[i * m:(i + 1) * m, j * m:(j + 1) * m]


@dataclass(frozen=True)
class StinespringData:
    """Kraus family K_k with u(x) = sum_k K_k^T x K_k and ||T||^2 = ||sum K_k^T K_k||."""

    kraus: tuple[np.ndarray, ...]
    dilation_dim: int
    t_norm_sq: float
    residual: float


@dataclass(frozen=True)
class CpVerdict:
    holds: bool | None          # None = solver could not certify either way
    witness: np.ndarray | None  # PSD (extension) Choi matrix when available
    residuals: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.holds)


def _assemble_choi(images: np.ndarray, n: int, m: int) -> np.ndarray:
    c = np.zeros((n * m, n * m))
    for i in range(n):
        for j in range(n):
            c[i * m:(i + 1) * m, j * m:(j + 1) * m] = images[i * n + j]
    return c


def _full_domain_images(u: LinearMap) -> tuple[np.ndarray, int]:
    """Images of u (or of its canonical extension) on the full matrix-unit basis.

    full_real domains are used as-is.  For complex_full the canonical
    conditional expectation x -> (x - JxJ)/2 of the ambient algebra onto the
    realified complex algebra is composed in front, which preserves complete
    positivity in both directions.
    """
    dom = u.domain
    if dom.kind == "full_real":
        return np.stack(u.images), dom.n
    if dom.kind == "complex_full":
        j = dom.complex_structure
        n = dom.n
        images = []
        for r in range(n):
            for s in range(n):
                e = np.zeros((n, n))
                e[r, s] = 1.0
                images.append(u(0.5 * (e - j @ e @ j)))
        return np.stack(images), n
    raise UnsupportedDomainError(
        f"choi needs a full_real or complex_full domain, got {dom.label}; "
        "use the CP-extension SDP route instead"
    )


def choi(u: LinearMap) -> ChoiMatrix:
    """The Choi matrix of a map with full-algebra domain."""
    images, n = _full_domain_images(u)
    return ChoiMatrix(n, u.codomain.n, _assemble_choi(images, n, u.codomain.n))


def map_from_choi(c: ChoiMatrix, codomain: MatrixSystem | None = None) -> LinearMap:
    """Rebuild the map on full_real(n) from its Choi matrix (exact round-trip)."""
    images = tuple(c.block(i, j).copy() for i in range(c.n) for j in range(c.n))
    return LinearMap(full_real(c.n), codomain or full_real(c.m), images)


def involute(u: LinearMap) -> LinearMap:
    """The involution u*(x) = u(x^T)^T.  involute is its own inverse."""
    t = u.domain.transpose_coeff
    stack = np.stack(u.images)
    images = []
    for k in range(u.domain.dim):
        images.append(np.tensordot(t[:, k], stack, axes=1).T)
    return LinearMap(u.domain, u.codomain, tuple(images))


def is_selfadjoint(u: LinearMap, tol: float = 1e-10) -> bool:
    from .opsys import map_dist
    return map_dist(involute(u), u) <= tol * _map_scale(u)


def is_skew(u: LinearMap, tol: float = 1e-10) -> bool:
    from .opsys import map_dist
    return map_dist(involute(u), (-1.0) * u) <= tol * _map_scale(u)


def _map_scale(u: LinearMap) -> float:
    return max(1.0, max(float(np.linalg.norm(x)) for x in u.images))


def extension_equalities(u: LinearMap):
    """Linear system pinning a symmetric ambient Choi to match u on the domain span.

    Variables are SymSpace coordinates of the Choi of Phi : M_n -> M_m; for
    every orthonormal domain element q the full image Phi(q) = u(q) is
    constrained.  Returns (E, rhs, space).
    """
    n, m = u.domain.n, u.codomain.n
    space = sdp.SymSpace(n * m)
    ii = np.repeat(np.arange(n), n)
    jj = np.tile(np.arange(n), n)
    rows, rhs = [], []
    for q, img in zip(u.domain.onb_mats, u.onb_images):
        w = q.reshape(-1)
        for r in range(m):
            for s in range(m):
                rows.append(space.functional_row(ii * m + r, jj * m + s, w))
                rhs.append(img[r, s])
    return np.asarray(rows), np.asarray(rhs), space


def is_cp(u: LinearMap, tol: float = 1e-8) -> CpVerdict:
    """Complete-positivity verdict with a PSD (extension) Choi witness.

    Full-algebra domains use the direct Choi criterion.  Subsystem domains ask
    the SDP for the least eigenvalue shift that makes some ambient extension's
    Choi PSD; the map is CP iff no shift is needed.
    """
    try:
        c = choi(u).matrix
    except UnsupportedDomainError:
        c = None
    if c is not None:
        scale = max(1.0, float(np.abs(c).max()))
        asym = float(np.linalg.norm(c - c.T))
        if asym > tol * scale:
            return CpVerdict(False, None, {"choi_asymmetry": asym})
        w, _ = mat.sym_eig(mat.sym_part(c))
        ok = w[-1] >= -tol * max(1.0, abs(w[0]))
        return CpVerdict(bool(ok), mat.sym_part(c), {"min_choi_eig": float(w[-1])})

    e_mat, rhs, space = extension_equalities(u)
    p = space.p
    p0, _, nullspace = sdp.eliminate_equalities(e_mat, rhs)
    nvar = nullspace.shape[1] + 1  # z..., t
    pencil = np.zeros((nvar + 1, p, p))
    pencil[0] = space.to_matrix(p0)
    for i in range(nullspace.shape[1]):
        pencil[1 + i] = space.to_matrix(nullspace[:, i])
    pencil[nvar] = np.eye(p)  # + t*I
    objective = np.zeros(nvar)
    objective[-1] = 1.0
    sol = sdp.solve(sdp.SdpProblem(objective, (pencil,)), tol=max(tol * 1e-1, 1e-10))
    if sol.status != "optimal":
        return CpVerdict(None, None, {"solver_status": sol.status, "gap": sol.gap})
    shift = sol.objective_value
    witness = pencil[0] + np.tensordot(sol.y, pencil[1:], axes=1) - shift * np.eye(p)
    scale = max(1.0, float(np.abs(witness).max()))
    holds = shift <= tol * scale
    return CpVerdict(bool(holds), mat.sym_part(witness) if holds else None,
                     {"min_extension_eig": float(-shift), "gap": sol.gap})


def kraus_stinespring(u: LinearMap, tol: float = 1e-8) -> StinespringData:
    """Kraus family of a CP map with full-algebra domain, from its Choi spectrum."""
    verdict = is_cp(u, tol=tol)
    if verdict.holds is not True:
        raise PreconditionError("kraus_stinespring needs a CP map")
    images, n = _full_domain_images(u)
    m = u.codomain.n
    c = mat.sym_part(_assemble_choi(images, n, m))
    w, q = mat.sym_eig(c)
    keep = w > KRAUS_RANK_TOL * max(w[0], 0.0)
    kraus = tuple(np.sqrt(w[i]) * q[:, i].reshape(n, m) for i in np.flatnonzero(keep))
    if not kraus:
        kraus = (np.zeros((n, m)),)
    gram = sum(k.T @ k for k in kraus)
    t_norm_sq = mat.op_norm(gram)
    resid = 0.0
    for x, img in zip(u.domain.onb_mats, u.onb_images):
        rebuilt = sum(k.T @ x @ k for k in kraus)
        resid = max(resid, float(np.linalg.norm(rebuilt - img)))
    return StinespringData(kraus, int(keep.sum()), float(t_norm_sq), resid)


def trace_state(v: MatrixSystem):
    """The normalized trace, a state on any of our systems."""
    n = v.n
    return lambda x: float(np.trace(x)) / n


def normalize_ucp(phi: LinearMap, state=None, check: bool = True) -> tuple[np.ndarray, LinearMap]:
    """Write a CP map as phi = a psi(.) a with a = phi(I)^(1/2) and psi unital CP.

    On the kernel of a, psi is padded with state(.) * (I - e) where e projects
    onto the range of a, so psi(I) = I even when phi(I) is singular.
    """
    if check:
        verdict = is_cp(phi)
        if verdict.holds is False:
            raise PreconditionError("normalize_ucp needs a CP map")
    m = phi.codomain.n
    b = mat.sym_part(phi.at_identity)
    w, q = mat.sym_eig(b)
    w = np.clip(w, 0.0, None)
    support = w > 1e-12 * max(w[0], 1e-300)
    a = (q * np.sqrt(w)) @ q.T
    inv_sqrt = np.zeros_like(w)
    inv_sqrt[support] = 1.0 / np.sqrt(w[support])
    a_pinv = (q * inv_sqrt) @ q.T
    e = (q[:, support]) @ (q[:, support]).T
    pad = np.eye(m) - e
    tau = state or trace_state(phi.domain)
    images = tuple(a_pinv @ x @ a_pinv + tau(bk) * pad
                   for bk, x in zip(phi.domain.basis, phi.images))
    psi = LinearMap(phi.domain, full_real(m), images)
    return a, psi


def ucp_witnesses(u: LinearMap, s1: LinearMap, s2: LinearMap,
                  state=None) -> tuple[LinearMap, LinearMap]:
    """Unitalize a witness pair: s_i' = s_i + state(.) (I - s_i(I)).

    Needs ||s_i(I)|| <= 1; the padded pair is unital, CP, and still witnesses
    the decomposability of u.
    """
    tau = state or trace_state(u.domain)
    out = []
    for s in (s1, s2):
        b = mat.sym_part(s.at_identity)
        if mat.op_norm(b) > 1.0 + 1e-9:
            raise PreconditionError("ucp_witnesses needs ||s_i(I)|| <= 1")
        w, q = mat.sym_eig(np.eye(s.codomain.n) - b)
        pad = (q * np.clip(w, 0.0, None)) @ q.T
        images = tuple(x + tau(bk) * pad for bk, x in zip(s.domain.basis, s.images))
        out.append(LinearMap(s.domain, s.codomain, images))
    return out[0], out[1]
