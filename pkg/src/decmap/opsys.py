"""Concrete finite-dimensional operator systems and their complexifications.

A system is stored as an ambient size n, a basis of n x n real matrices, and
optionally a complex structure J (an orthogonal skew matrix with J^2 = -I that
commutes with the span).  Complexified systems are always kept in realified
form: the complexification of V lives inside M_{2n}(R) as the span of
c(b, 0) = [[b, 0], [0, b]] and c(0, b) = [[0, -b], [b, 0]] over a basis of V,
with J = c(0, I).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import mat
from .errors import DomainError, ShapeError, ValidationError

__all__ = [
    "MatrixSystem",
    "LinearMap",
    "full_real",
    "ell_inf",
    "quaternion",
    "span_system",
    "complex_full",
    "build_system",
    "complexify_system",
    "forget_complex_structure",
    "complexify_map",
    "canonical_map",
    "paulsen_system",
    "direct_sum",
    "coordinate_projection",
    "direct_sum_map",
    "block2_system",
    "block2_map",
    "identity_map",
    "zero_map",
    "compose",
    "restrict_map",
    "map_dist",
    "commutes_with_structures",
]

SPAN_TOL = 1e-10


def _vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float).reshape(-1)


@dataclass(frozen=True, eq=False)
class MatrixSystem:
    """An operator system of n x n real matrices, given by a spanning basis.

    Invariants: the basis is linearly independent, the span contains the
    identity and is closed under transpose, and any complex structure J
    satisfies J^T = -J, J^2 = -I and J * span = span.
    """

    basis: tuple[np.ndarray, ...]
    complex_structure: np.ndarray | None = None
    label: str = "span"
    kind: str = "span"
    real_form: "MatrixSystem | None" = None
    summands: "tuple[MatrixSystem, ...] | None" = None

    def __post_init__(self):
        basis = tuple(np.array(b, dtype=float) for b in self.basis)
        if not basis:
            raise ValidationError(f"{self.label}: empty basis")
        n = basis[0].shape[0]
        for b in basis:
            if b.shape != (n, n):
                raise ValidationError(f"{self.label}: basis elements must all be {n}x{n}")
            b.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        if self.complex_structure is not None:
            j = np.array(self.complex_structure, dtype=float)
            j.setflags(write=False)
            object.__setattr__(self, "complex_structure", j)
        self._validate()

    # -- derived data ------------------------------------------------------

    @property
    def n(self) -> int:
        """Ambient matrix size."""
        return self.basis[0].shape[0]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_full(self) -> bool:
        return self.dim == self.n * self.n

    @property
    def is_complexified(self) -> bool:
        return self.complex_structure is not None

    @cached_property
    def _svd(self):
        b = np.stack([_vec(x) for x in self.basis])  # (dim, n^2)
        u, s, vt = np.linalg.svd(b, full_matrices=True)
        return b, u, s, vt

    @cached_property
    def onb(self) -> np.ndarray:
        """Orthonormal basis of the span, as rows of vec'd matrices (dim x n^2)."""
        _, _, _, vt = self._svd
        return vt[: self.dim]

    @cached_property
    def complement_onb(self) -> np.ndarray:
        """Orthonormal basis of the Frobenius-orthogonal complement ((n^2-dim) x n^2)."""
        _, _, _, vt = self._svd
        return vt[self.dim:]

    @cached_property
    def onb_mats(self) -> np.ndarray:
        return self.onb.reshape(self.dim, self.n, self.n)

    @cached_property
    def onb_coeff(self) -> np.ndarray:
        """Matrix M with onb[l] = sum_k M[l, k] * basis[k]."""
        _, u, s, _ = self._svd
        return (u / s).T

    @cached_property
    def _coords_op(self) -> np.ndarray:
        # (B^T)^+ : vec(x) -> coordinates in the user basis
        _, u, s, vt = self._svd
        return (u / s) @ vt[: self.dim]

    @cached_property
    def unit_coords(self) -> np.ndarray:
        return self.coords(np.eye(self.n))

    @cached_property
    def transpose_coeff(self) -> np.ndarray:
        """Matrix T with basis[k]^T = sum_l T[l, k] * basis[l]."""
        return np.stack([self.coords(b.T) for b in self.basis], axis=1)

    # -- membership and coordinates ----------------------------------------

    def span_residual(self, x) -> float:
        v = _vec(x)
        q = self.onb @ v
        return float(np.linalg.norm(v - self.onb.T @ q))

    def contains(self, x, tol: float = SPAN_TOL) -> bool:
        return self.span_residual(x) <= tol * max(1.0, float(np.linalg.norm(x)))

    def coords(self, x, tol: float = SPAN_TOL) -> np.ndarray:
        """Coordinates of x in the user basis; raises if x is not in the span."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n, self.n):
            raise ShapeError(f"{self.label}: element must be {self.n}x{self.n}")
        resid = self.span_residual(x)
        if resid > tol * max(1.0, float(np.linalg.norm(x))):
            raise ValidationError(
                f"{self.label}: element is not in the span (residual {resid:.3e})"
            )
        return self._coords_op @ _vec(x)

    def from_coords(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        return np.tensordot(c, np.stack(self.basis), axes=1)

    def project(self, x) -> np.ndarray:
        """Frobenius-orthogonal projection of x onto the span."""
        v = self.onb.T @ (self.onb @ _vec(x))
        return v.reshape(self.n, self.n)

    # -- validation ---------------------------------------------------------

    def _validate(self):
        n, d = self.n, self.dim
        if d > n * n:
            raise ValidationError(f"{self.label}: {d} basis elements in ambient dimension {n * n}")
        b, _, s, _ = self._svd
        gram_det = float(np.prod(s[:d] ** 2)) if s.size else 0.0
        if s.size < d or gram_det <= 1e-12:
            raise ValidationError(
                f"{self.label}: basis is not linearly independent (Gram determinant {gram_det:.3e})"
            )
        eye = np.eye(n)
        if self.span_residual(eye) > SPAN_TOL * np.sqrt(n):
            raise ValidationError(f"{self.label}: identity is not in the span")
        for k, x in enumerate(self.basis):
            resid = self.span_residual(x.T)
            if resid > SPAN_TOL * max(1.0, float(np.linalg.norm(x))):
                raise ValidationError(
                    f"{self.label}: span is not closed under transpose "
                    f"(basis element {k}, residual {resid:.3e})"
                )
        j = self.complex_structure
        if j is not None:
            if j.shape != (n, n):
                raise ValidationError(f"{self.label}: complex structure must be {n}x{n}")
            if np.linalg.norm(j + j.T) > SPAN_TOL * n:
                raise ValidationError(f"{self.label}: complex structure is not skew")
            if np.linalg.norm(j @ j + eye) > SPAN_TOL * n:
                raise ValidationError(f"{self.label}: complex structure does not square to -I")
            for k, x in enumerate(self.basis):
                if not self.contains(j @ x):
                    raise ValidationError(
                        f"{self.label}: J * span is not contained in the span (element {k})"
                    )

    def __repr__(self):
        j = ", J" if self.is_complexified else ""
        return f"MatrixSystem({self.label}: dim {self.dim} in M_{self.n}(R){j})"


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A linear map between systems, given by images of the domain basis."""

    domain: MatrixSystem
    codomain: MatrixSystem
    images: tuple[np.ndarray, ...]

    def __post_init__(self):
        images = tuple(np.array(x, dtype=float) for x in self.images)
        if len(images) != self.domain.dim:
            raise ValidationError(
                f"map needs {self.domain.dim} images, got {len(images)}"
            )
        m = self.codomain.n
        for k, x in enumerate(images):
            if x.shape != (m, m):
                raise ValidationError(f"image {k} must be {m}x{m}, got {x.shape}")
            if not self.codomain.contains(x):
                raise ValidationError(
                    f"image {k} is not in the codomain span "
                    f"(residual {self.codomain.span_residual(x):.3e})"
                )
            x.setflags(write=False)
        object.__setattr__(self, "images", images)

    @cached_property
    def _stack(self) -> np.ndarray:
        return np.stack(self.images)

    @cached_property
    def onb_images(self) -> np.ndarray:
        """Images of the domain's orthonormal basis, stacked (dim, m, m)."""
        return np.tensordot(self.domain.onb_coeff, self._stack, axes=1)

    def __call__(self, x) -> np.ndarray:
        c = self.domain.coords(x)
        return np.tensordot(c, self._stack, axes=1)

    @cached_property
    def at_identity(self) -> np.ndarray:
        return np.tensordot(self.domain.unit_coords, self._stack, axes=1)

    # pointwise vector-space operations (same domain and codomain ambient)

    def _check_compatible(self, other: "LinearMap"):
        if self.domain is not other.domain and self.domain.n != other.domain.n:
            raise DomainError("maps live on different domains")
        if self.codomain.n != other.codomain.n:
            raise DomainError("maps have different codomain ambients")

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._check_compatible(other)
        other_images = other.images if other.domain is self.domain else tuple(
            other(b) for b in self.domain.basis
        )
        codomain = self.codomain if all(
            self.codomain.contains(x + y) for x, y in zip(self.images, other_images)
        ) else full_real(self.codomain.n)
        return LinearMap(self.domain, codomain,
                         tuple(x + y for x, y in zip(self.images, other_images)))

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + (-1.0) * other

    def __rmul__(self, a: float) -> "LinearMap":
        return LinearMap(self.domain, self.codomain, tuple(float(a) * x for x in self.images))

    def __neg__(self) -> "LinearMap":
        return (-1.0) * self

    def __repr__(self):
        return f"LinearMap({self.domain.label} -> {self.codomain.label})"


# --------------------------------------------------------------------------
# system constructors
# --------------------------------------------------------------------------

def full_real(n: int) -> MatrixSystem:
    """The full matrix algebra M_n(R), basis E_ij in row-major order."""
    basis = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n))
            e[i, j] = 1.0
            basis.append(e)
    return MatrixSystem(tuple(basis), label=f"full_real({n})", kind="full_real")


def ell_inf(n: int) -> MatrixSystem:
    """The diagonal algebra l^inf_n inside M_n(R), basis E_kk."""
    basis = []
    for k in range(n):
        e = np.zeros((n, n))
        e[k, k] = 1.0
        basis.append(e)
    return MatrixSystem(tuple(basis), label=f"ell_inf({n})", kind="ell_inf")


def quaternion() -> MatrixSystem:
    """The quaternions in M_4(R) via the left regular representation on (1, i, j, k).

    Transpose of the representing matrices is quaternion conjugation, so the
    matrix involution matches the *-structure of H.
    """
    li = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
    lj = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
    lk = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)
    return MatrixSystem((np.eye(4), li, lj, lk), label="quaternion", kind="quaternion")


def span_system(basis, label: str = "span", complex_structure=None) -> MatrixSystem:
    """A system spanned by user-supplied matrices; invariants are validated."""
    return MatrixSystem(tuple(np.asarray(b, dtype=float) for b in basis),
                        complex_structure=complex_structure, label=label, kind="span")


def forget_complex_structure(v: MatrixSystem) -> MatrixSystem:
    """The same span viewed as a plain real system, dropping J."""
    if not v.is_complexified:
        return v
    return MatrixSystem(v.basis, label=f"{v.label}_real", kind="span")


def complexify_system(v: MatrixSystem) -> MatrixSystem:
    """The realified complexification of a real system: span of c(b, 0) and c(0, b).

    The returned system lives in M_{2n}(R), carries the complex structure
    J = c(0, I) and remembers v for the canonical maps.
    """
    if v.is_complexified:
        raise DomainError(f"{v.label} already carries a complex structure")
    zero = np.zeros((v.n, v.n))
    basis = [mat.realify((b, zero)) for b in v.basis]
    basis += [mat.realify((zero, b)) for b in v.basis]
    j = mat.realify((zero, np.eye(v.n)))
    return MatrixSystem(tuple(basis), complex_structure=j,
                        label=f"{v.label}_c", kind="complexified", real_form=v)


def complex_full(n: int) -> MatrixSystem:
    """Realified M_n(C) inside M_{2n}(R): basis c(E_ij, 0) row-major, then c(0, E_ij)."""
    s = complexify_system(full_real(n))
    return MatrixSystem(s.basis, complex_structure=s.complex_structure,
                        label=f"complex_full({n})", kind="complex_full", real_form=s.real_form)


def build_system(kind: str, n: int | None = None, basis=None, label: str | None = None) -> MatrixSystem:
    """Construct a named system: full_real(n), ell_inf(n), quaternion, complex_full(n) or span(basis)."""
    if kind == "full_real":
        s = full_real(int(n))
    elif kind == "ell_inf":
        s = ell_inf(int(n))
    elif kind == "quaternion":
        s = quaternion()
    elif kind == "complex_full":
        s = complex_full(int(n))
    elif kind == "span":
        if basis is None:
            raise ValidationError("kind 'span' needs a basis")
        s = span_system(basis, label=label or "span")
    else:
        raise ValidationError(f"unknown system kind {kind!r}")
    return s


def paulsen_system(x_basis, diag: str = "scalar", shape: tuple[int, int] | None = None) -> MatrixSystem:
    """The Paulsen system S(X) in M_{p+q}(R) for X spanned by p x q matrices.

    Basis order: the diagonal part first (I_p (+) 0 and 0 (+) I_q for
    diag="scalar", all E_ij of both diagonal blocks for diag="full"), then the
    upper-corner copies of x_basis, then the lower-corner transposes.
    """
    x_basis = [np.asarray(x, dtype=float) for x in x_basis]
    if x_basis:
        p, q = x_basis[0].shape
        if any(x.shape != (p, q) for x in x_basis):
            raise ValidationError("corner basis elements must share one shape")
    elif shape is not None:
        p, q = shape
    else:
        raise ValidationError("paulsen_system with empty corner needs an explicit shape")
    m = p + q
    basis = []
    if diag == "scalar":
        d1 = np.zeros((m, m)); d1[:p, :p] = np.eye(p)
        d2 = np.zeros((m, m)); d2[p:, p:] = np.eye(q)
        basis += [d1, d2]
    elif diag == "full":
        for i in range(p):
            for j in range(p):
                e = np.zeros((m, m)); e[i, j] = 1.0
                basis.append(e)
        for i in range(q):
            for j in range(q):
                e = np.zeros((m, m)); e[p + i, p + j] = 1.0
                basis.append(e)
    else:
        raise ValidationError(f"diag must be 'scalar' or 'full', got {diag!r}")
    for x in x_basis:
        e = np.zeros((m, m)); e[:p, p:] = x
        basis.append(e)
    for x in x_basis:
        e = np.zeros((m, m)); e[p:, :p] = x.T
        basis.append(e)
    return MatrixSystem(tuple(basis), label=f"paulsen({p}x{q},{diag})", kind="paulsen")


def direct_sum(v: MatrixSystem, w: MatrixSystem) -> MatrixSystem:
    """Block-diagonal direct sum of two systems inside M_{n_v + n_w}(R)."""
    nv, nw = v.n, w.n
    n = nv + nw
    basis = []
    for b in v.basis:
        e = np.zeros((n, n)); e[:nv, :nv] = b
        basis.append(e)
    for b in w.basis:
        e = np.zeros((n, n)); e[nv:, nv:] = b
        basis.append(e)
    j = None
    if v.is_complexified and w.is_complexified:
        j = np.zeros((n, n))
        j[:nv, :nv] = v.complex_structure
        j[nv:, nv:] = w.complex_structure
    return MatrixSystem(tuple(basis), complex_structure=j,
                        label=f"{v.label} (+) {w.label}", kind="direct_sum", summands=(v, w))


def coordinate_projection(s: MatrixSystem, index: int) -> LinearMap:
    """The CP projection of a direct sum onto one summand."""
    if s.summands is None:
        raise DomainError(f"{s.label} is not a direct sum")
    offsets = np.cumsum([0] + [t.n for t in s.summands])
    if not 0 <= index < len(s.summands):
        raise DomainError(f"summand index {index} out of range")
    target = s.summands[index]
    lo, hi = offsets[index], offsets[index + 1]
    images = tuple(np.array(b[lo:hi, lo:hi]) for b in s.basis)
    return LinearMap(s, target, images)


def direct_sum_map(u: LinearMap, v: LinearMap, sum_system: MatrixSystem | None = None) -> LinearMap:
    """The map x -> u(x) (+) v(x) for maps u, v sharing a domain."""
    if u.domain is not v.domain:
        raise DomainError("direct_sum_map needs a shared domain")
    s = sum_system or direct_sum(u.codomain, v.codomain)
    nv = u.codomain.n
    images = []
    for x, y in zip(u.images, v.images):
        e = np.zeros((s.n, s.n))
        e[:nv, :nv] = x
        e[nv:, nv:] = y
        images.append(e)
    return LinearMap(u.domain, s, tuple(images))


def block2_system(w: MatrixSystem) -> MatrixSystem:
    """The system M_2(W) of 2x2 blocks with entries in W, inside M_{2m}(R)."""
    m = w.n
    basis = []
    for p in range(2):
        for q in range(2):
            cell = np.zeros((2, 2)); cell[p, q] = 1.0
            for b in w.basis:
                basis.append(np.kron(cell, b))
    return MatrixSystem(tuple(basis), label=f"M_2({w.label})", kind="block2")


def block2_map(s1: LinearMap, u: LinearMap, ustar: LinearMap, s2: LinearMap,
               codomain: MatrixSystem | None = None) -> LinearMap:
    """Assemble the 2x2 block map x -> [[s1(x), u(x)], [ustar(x), s2(x)]]."""
    dom = u.domain
    for f in (s1, ustar, s2):
        if f.domain is not dom and f.domain.n != dom.n:
            raise DomainError("block corners must share the domain")
    w = codomain or block2_system(full_real(u.codomain.n))
    e11, e12 = np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[0.0, 1.0], [0.0, 0.0]])
    e21, e22 = e12.T, np.array([[0.0, 0.0], [0.0, 1.0]])
    images = []
    for k, b in enumerate(dom.basis):
        images.append(np.kron(e11, s1.images[k] if s1.domain is dom else s1(b))
                      + np.kron(e12, u.images[k])
                      + np.kron(e21, ustar.images[k] if ustar.domain is dom else ustar(b))
                      + np.kron(e22, s2.images[k] if s2.domain is dom else s2(b)))
    return LinearMap(dom, w, tuple(images))


# --------------------------------------------------------------------------
# maps: constructors and algebra
# --------------------------------------------------------------------------

def identity_map(v: MatrixSystem) -> LinearMap:
    return LinearMap(v, v, tuple(np.array(b) for b in v.basis))


def zero_map(v: MatrixSystem, w: MatrixSystem | None = None) -> LinearMap:
    w = w or v
    z = np.zeros((w.n, w.n))
    return LinearMap(v, w, tuple(z.copy() for _ in v.basis))


def compose(outer: LinearMap, inner: LinearMap) -> LinearMap:
    """The composition outer o inner."""
    if inner.codomain.n != outer.domain.n:
        raise DomainError("composition: codomain/domain ambients do not match")
    return LinearMap(inner.domain, outer.codomain, tuple(outer(x) for x in inner.images))


def restrict_map(u: LinearMap, subsystem: MatrixSystem) -> LinearMap:
    """Restrict u to a subsystem of its domain (same ambient, smaller span)."""
    if subsystem.n != u.domain.n:
        raise DomainError("restriction target must share the domain ambient")
    return LinearMap(subsystem, u.codomain, tuple(u(b) for b in subsystem.basis))


def map_dist(u: LinearMap, v: LinearMap) -> float:
    """max_l ||u(q_l) - v(q_l)||_F over an orthonormal basis of the common domain."""
    if u.domain.n != v.domain.n or u.codomain.n != v.codomain.n:
        raise DomainError("maps are not comparable")
    diffs = [u(q) - v(q) for q in u.domain.onb_mats]
    return max(float(np.linalg.norm(d)) for d in diffs)


def commutes_with_structures(u: LinearMap, tol: float = 1e-9) -> bool:
    """Whether u intertwines the complex structures: u(J_V x) = J_W u(x) on the span."""
    jv, jw = u.domain.complex_structure, u.codomain.complex_structure
    if jv is None or jw is None:
        raise DomainError("both systems need a complex structure")
    for b, img in zip(u.domain.basis, u.images):
        lhs = u(jv @ b)
        if np.linalg.norm(lhs - jw @ img) > tol * max(1.0, float(np.linalg.norm(img))):
            return False
    return True


# --------------------------------------------------------------------------
# complexification functor and canonical maps
# --------------------------------------------------------------------------

def complexify_map(u: LinearMap,
                   domain_c: MatrixSystem | None = None,
                   codomain_c: MatrixSystem | None = None) -> LinearMap:
    """The complexification u_c : V_c -> W_c, acting as c(x, y) -> c(u(x), u(y))."""
    if u.domain.is_complexified or u.codomain.is_complexified:
        raise DomainError("complexify_map needs real (non-complexified) systems")
    vc = domain_c or complexify_system(u.domain)
    wc = codomain_c or complexify_system(u.codomain)
    zero = np.zeros((u.codomain.n, u.codomain.n))
    images = [mat.realify((x, zero)) for x in u.images]
    images += [mat.realify((zero, x)) for x in u.images]
    return LinearMap(vc, wc, tuple(images))


def canonical_map(which: str, v: MatrixSystem) -> LinearMap:
    """The canonical maps of the complexification.

    kappa : V -> V_c is the inclusion x -> c(x, 0); rho and sigma are the real
    and imaginary part projections V_c -> V; theta : V_c -> V_c is the period-2
    conjugation c(x, y) -> c(x, -y).  kappa takes the real system; the others
    take the complexified system (which must remember its real form).
    """
    if which == "kappa":
        if v.is_complexified:
            raise DomainError("kappa takes the real system, not the complexification")
        vc = complexify_system(v)
        zero = np.zeros((v.n, v.n))
        return LinearMap(v, vc, tuple(mat.realify((b, zero)) for b in v.basis))
    if v.real_form is None:
        raise DomainError(f"{which} needs a complexified system with a known real form")
    r = v.real_form
    d = r.dim
    if len(v.basis) != 2 * d:
        raise DomainError(f"{v.label}: basis is not in c(b,0), c(0,b) order")
    zero_r = np.zeros((r.n, r.n))
    if which == "rho":
        images = tuple(np.array(b) for b in r.basis) + tuple(zero_r.copy() for _ in range(d))
        return LinearMap(v, r, images)
    if which == "sigma":
        images = tuple(zero_r.copy() for _ in range(d)) + tuple(np.array(b) for b in r.basis)
        return LinearMap(v, r, images)
    if which == "theta":
        images = tuple(np.array(b) for b in v.basis[:d]) + tuple(-b for b in v.basis[d:])
        return LinearMap(v, v, images)
    raise DomainError(f"unknown canonical map {which!r}")
