"""Build operator systems and walk through the complexification machinery.

A system is a unital, transpose-closed span of real matrices.  The
complexification of a system V is stored realified: elements x + iy become
the doubled real matrices c(x, y) = [[x, -y], [y, x]], and multiplication by
i becomes left multiplication by J = c(0, I).
"""

import numpy as np

from decmap import (LinearMap, canonical_map, complex_full, complexify_map,
                    complexify_system, compose, full_real, identity_map,
                    map_dist, quaternion, realify, zero_map)

np.set_printoptions(precision=3, suppress=True)

# ---------------------------------------------------------------------------
# the basic zoo
# ---------------------------------------------------------------------------
v2 = full_real(2)
print("full matrix algebra:", v2)

h = quaternion()
print("quaternions via left regular representation:", h)
one, i, j, k = h.basis
print("  i*j == k:", np.array_equal(i @ j, k))
print("  i^T == -i (transpose is conjugation):", np.array_equal(i.T, -i))

# ---------------------------------------------------------------------------
# complexification doubles the real dimension and installs J
# ---------------------------------------------------------------------------
vc = complexify_system(v2)
print("\ncomplexified M_2(R):", vc)
print("  same thing built directly:", complex_full(2))

jmat = vc.complex_structure
z = realify((np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]])))  # I + i E_01
print("  J @ z stays in the span:", vc.contains(jmat @ z))
print("  J^2 = -I:", np.allclose(jmat @ jmat, -np.eye(4)))

# ---------------------------------------------------------------------------
# the canonical maps: inclusion, real/imaginary parts, conjugation
# ---------------------------------------------------------------------------
kappa = canonical_map("kappa", v2)
rho = canonical_map("rho", kappa.codomain)
sigma = canonical_map("sigma", kappa.codomain)
theta = canonical_map("theta", kappa.codomain)

print("\nrho o kappa is the identity:",
      map_dist(compose(rho, kappa), identity_map(v2)) < 1e-12)
print("sigma o kappa is zero:",
      map_dist(compose(sigma, kappa), zero_map(v2)) < 1e-12)

rng = np.random.default_rng(0)
x, y = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
elem = realify((x, y))
print("theta is the period-2 conjugation c(x, y) -> c(x, -y):",
      np.allclose(theta(theta(elem)), elem))

# ---------------------------------------------------------------------------
# complexifying a map acts coordinatewise: c(x, y) -> c(u(x), u(y))
# ---------------------------------------------------------------------------
transpose = LinearMap(v2, v2, tuple(b.T for b in v2.basis))
tc = complexify_map(transpose)
print("\ntranspose complexified sends c(x, y) to c(x^T, y^T):",
      np.allclose(tc(realify((x, y))), realify((x.T, y.T))))
