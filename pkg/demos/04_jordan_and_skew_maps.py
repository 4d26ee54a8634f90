"""The Jordan split of a decomposable map and the skew half of the story.

Every map splits as u = u_sa + u_as with u_sa selfadjoint and u_as skew
(u*(x) = u(x^T)^T equal to u and -u respectively).  Selfadjoint decomposable
maps are differences of CP maps; skew decomposable maps are imaginary parts
of CP maps between complexifications and admit a single symmetric witness,
a scaled-unital completion, and a Stinespring-type factorization.
"""

import numpy as np

from decmap import (LinearMap, canonical_map, cb_norm, complex_full, dec_norm,
                    full_real, icp_extract, jordan_split, op_norm, realify,
                    sa_difference_norm, scp_complete, skew_witness,
                    stinespring_scp)

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(11)

v2 = full_real(2)
images = [rng.standard_normal((2, 2)) for _ in range(4)]
u = LinearMap(v2, v2, tuple(x / max(np.linalg.norm(y) for y in images) for x in images))

# ---------------------------------------------------------------------------
# the split and the two specialized programs
# ---------------------------------------------------------------------------
u_sa, u_as = jordan_split(u)
print("recombination error:",
      max(np.abs(a + b - c).max() for a, b, c in zip(u_sa.images, u_as.images, u.images)))

dec_sa = dec_norm(u_sa).value
print(f"selfadjoint part: dec = {dec_sa:.8f}, "
      f"difference-of-CP program = {sa_difference_norm(u_sa):.8f}")

dec_as = dec_norm(u_as).value
s, val = skew_witness(u_as)
print(f"skew part: dec = {dec_as:.8f}, single-witness program = {val:.8f}")

# ---------------------------------------------------------------------------
# completing a skew map: s(1) = dec * I and the norm addition rule
# ---------------------------------------------------------------------------
s, norms = scp_complete(u_as)
print(f"\ncompletion flavor: {norms['flavor']}")
print(f"||c(s(1), u(1))|| = {norms['block_norm']:.8f}"
      f" = dec + ||u(1)|| = {norms['dec'] + norms['unit_norm']:.8f}")

data = stinespring_scp(u_as)
print(f"Stinespring data: {data.dilation_dim} Kraus elements,"
      f" ||T||^2 = {data.t_norm_sq:.8f}"
      f" (cb + ||u(1)|| = {cb_norm(u_as) + op_norm(u_as.at_identity):.8f})")

# ---------------------------------------------------------------------------
# the flagship example: the imaginary-part map
# ---------------------------------------------------------------------------
sigma = canonical_map("sigma", complex_full(2))
print(f"\nimaginary-part map on realified M_2(C):"
      f" dec = {dec_norm(sigma).value:.8f}, cb = {cb_norm(sigma):.8f}")
sa_part, as_part = jordan_split(sigma)
print("selfadjoint part is zero:",
      all(np.allclose(img, 0.0, atol=1e-12) for img in sa_part.images))
print("so the dec space is strictly larger than differences of CP maps over R")

# ---------------------------------------------------------------------------
# skew maps really are imaginary parts: extract one from a complex CP map
# ---------------------------------------------------------------------------
from decmap import complexify_system

vc = complexify_system(v2)
kraus = [realify((rng.standard_normal((2, 2)), rng.standard_normal((2, 2))))
         for _ in range(2)]
phi = LinearMap(vc, vc, tuple(sum(k.T @ b @ k for k in kraus) for b in vc.basis))
extracted = icp_extract(phi)
print(f"\nimaginary part of a complex CP map: dec = {dec_norm(extracted).value:.6f}"
      f" <= ||phi(1)|| = {op_norm(phi.at_identity):.6f}")
