"""The decomposable norm, the cb norm, and where they live relative to each other.

dec_norm minimizes max(||S1(1)||, ||S2(1)||) over CP witness pairs making
[[S1, u], [u*, S2]] completely positive; cb_norm runs the Paulsen-system
CP-extension program.  On maps into full matrix algebras the two agree; the
inequality cb <= dec holds always.
"""

import numpy as np

from decmap import (Factorization, LinearMap, cb_norm, dec_norm, delta_value,
                    ell_inf, full_real, op_norm, span_system)

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(7)

v2 = full_real(2)

# ---------------------------------------------------------------------------
# benchmarks: the identity and the transpose
# ---------------------------------------------------------------------------
ident = LinearMap(v2, v2, tuple(np.array(b) for b in v2.basis))
transpose = LinearMap(v2, v2, tuple(b.T for b in v2.basis))

res = dec_norm(ident)
print(f"identity:  dec = {res.value:.8f}, cb = {cb_norm(ident):.8f}")
res_t = dec_norm(transpose)
print(f"transpose: dec = {res_t.value:.8f}, cb = {cb_norm(transpose):.8f}")
print("optimal witnesses for the transpose evaluate at 1 to:")
print(res_t.s1.at_identity)

# ---------------------------------------------------------------------------
# conjugations x -> a^T x b are decomposable with dec <= ||a|| ||b||
# ---------------------------------------------------------------------------
a, b = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
conj = LinearMap(v2, v2, tuple(a.T @ x @ b for x in v2.basis))
print(f"\nconjugation: dec = {dec_norm(conj).value:.6f}"
      f" <= ||a|| ||b|| = {op_norm(a) * op_norm(b):.6f}")

# ---------------------------------------------------------------------------
# a subsystem codomain: witnesses must take values inside the span
# ---------------------------------------------------------------------------
x = rng.standard_normal((3, 3))
sub = span_system([np.eye(3), x, x.T], label="span{1, x, x^T}")
images = [np.tensordot(rng.standard_normal(3), np.stack(sub.basis), axes=1)
          for _ in range(4)]
into_sub = LinearMap(v2, sub, tuple(images))
res_sub = dec_norm(into_sub)
if res_sub.not_decomposable:
    print("\nmap into the 3-dimensional subsystem is NOT decomposable there")
else:
    print(f"\nmap into a 3-dimensional subsystem: dec = {res_sub.value:.6f},"
          f" cb = {cb_norm(into_sub):.6f}")
    print("witness images stay in the span:",
          all(sub.contains(img) for img in res_sub.s1.images))

# ---------------------------------------------------------------------------
# maps on l^inf_n: any factorization of the images bounds dec from above
# ---------------------------------------------------------------------------
dom = ell_inf(3)
cod = full_real(2)
u = LinearMap(dom, cod, tuple(rng.standard_normal((2, 2)) for _ in range(3)))
dec = dec_norm(u).value
print(f"\nl^inf_3 -> M_2: dec = {dec:.6f}")
for trial in range(3):
    pairs = []
    for img in u.images:
        g = rng.standard_normal((2, 2)) + 3.0 * np.eye(2)
        pairs.append((g, np.linalg.solve(g, img)))
    val = delta_value(Factorization(tuple(pairs)), u=u)
    print(f"  factorization {trial}: delta = {val:.6f} (>= dec: {val >= dec - 1e-7})")
