"""Choi matrices, CP verdicts, Kraus families and witness unitalization.

Over the reals a map is completely positive iff it is *-preserving and its
Choi matrix is PSD; both facts are visible in the Choi matrix itself
(symmetry and eigenvalues).  Maps out of a proper subsystem are tested
through a CP-extension SDP instead.
"""

import numpy as np

from decmap import (LinearMap, canonical_map, choi, complex_full, full_real,
                    identity_map, involute, is_cp, kraus_stinespring,
                    normalize_ucp, sym_eig, ucp_witnesses)

np.set_printoptions(precision=3, suppress=True)

v2 = full_real(2)
ident = identity_map(v2)
transpose = LinearMap(v2, v2, tuple(b.T for b in v2.basis))

# ---------------------------------------------------------------------------
# the Choi matrix separates CP from merely positive
# ---------------------------------------------------------------------------
c_id = choi(ident)
c_tr = choi(transpose)
print("Choi of the identity (rank one, PSD):\n", c_id.matrix)
print("eigenvalues of the transpose's Choi:", np.round(sym_eig(c_tr.matrix)[0], 6))
print("identity CP:", bool(is_cp(ident)))
print("transpose CP:", bool(is_cp(transpose)))

# ---------------------------------------------------------------------------
# Kraus data comes from the Choi spectrum
# ---------------------------------------------------------------------------
rng = np.random.default_rng(1)
a = rng.standard_normal((2, 2))
conj = LinearMap(v2, v2, tuple(a.T @ b @ a for b in v2.basis))
data = kraus_stinespring(conj)
print("\nx -> A^T x A has a single Kraus element (up to sign):")
print("  dilation dimension:", data.dilation_dim)
print("  recovered K:\n", data.kraus[0])
print("  ||T||^2 = ||sum K^T K||:", round(data.t_norm_sq, 6))

trace_channel = LinearMap(v2, v2, tuple(np.trace(b) * np.eye(2) for b in v2.basis))
print("x -> tr(x) I needs", kraus_stinespring(trace_channel).dilation_dim, "Kraus elements")

# ---------------------------------------------------------------------------
# complex_full domains have a canonical Choi; other subsystems go through
# the CP-extension SDP
# ---------------------------------------------------------------------------
rho = canonical_map("rho", complex_full(2))
verdict = is_cp(rho)
print("\nreal-part projection on realified M_2(C) is CP:", bool(verdict))
print("  Choi minimal eigenvalue:", f"{verdict.residuals['min_choi_eig']:.2e}")

from decmap import quaternion

h = quaternion()
incl = LinearMap(h, full_real(4), tuple(np.array(b) for b in h.basis))
verdict = is_cp(incl)
print("quaternion inclusion (subsystem domain, extension SDP) is CP:", bool(verdict))
print("  extension Choi minimal eigenvalue:",
      f"{verdict.residuals['min_extension_eig']:.2e}")

# ---------------------------------------------------------------------------
# normalization phi = a psi(.) a with psi unital, even when phi(1) is singular
# ---------------------------------------------------------------------------
e11 = np.diag([1.0, 0.0])
compress = LinearMap(v2, v2, tuple(e11 @ b @ e11 for b in v2.basis))
a_half, psi = normalize_ucp(compress)
print("\ncompression to the corner: phi(1) =\n", compress.at_identity)
print("psi(1) after padding on the kernel:\n", psi.at_identity)

# ---------------------------------------------------------------------------
# witness pairs can always be made unital without losing the block positivity
# ---------------------------------------------------------------------------
u = 0.5 * ident
s1, s2 = ucp_witnesses(u, 0.5 * ident, 0.5 * ident)
print("\npadded witnesses are unital:", np.allclose(s1.at_identity, np.eye(2)))
print("and still selfadjoint witnesses:",
      bool(is_cp(s1)) and bool(is_cp(s2)))
print("involute(u) == u for the identity:", np.allclose(involute(u)(np.eye(2)), u(np.eye(2))))
