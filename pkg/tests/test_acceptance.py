"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  The ordering criterion aggregates every (cb, dec) pair computed across
the whole battery, so it runs last together with the wall-clock budget check.
"""

import time

import numpy as np

from decmap import cpmap, decnorm, mat, opsys, sdp, suite

START = time.perf_counter()

# every (label, cb, dec) pair computed anywhere in this battery
POOL: list[tuple[str, float, float]] = []


def _announce(num, desc, ok, detail=""):
    tail = f"  ({detail})" if detail else ""
    line = f"criterion {num:>2} [{'PASS' if ok else 'FAIL'}] {desc}{tail}"
    print(line)
    assert ok, line


def _rng(criterion, trial):
    return np.random.default_rng([100 + criterion, trial])


def rand_map(rng, dom, cod):
    images = [np.tensordot(rng.standard_normal(cod.dim), cod.onb_mats, axes=1)
              for _ in range(dom.dim)]
    u = opsys.LinearMap(dom, cod, tuple(images))
    scale = max(float(np.linalg.norm(x)) for x in u.images)
    return (1.0 / max(scale, 1e-2)) * u


def rand_cp(rng, dom, cod):
    r = int(rng.integers(1, 5))
    kraus = [rng.standard_normal((dom.n, cod.n)) for _ in range(r)]
    images = tuple(sum(k.T @ b @ k for k in kraus) for b in dom.basis)
    u = opsys.LinearMap(dom, cod, images)
    return (1.0 / max(mat.op_norm(u.at_identity), 1e-2)) * u


def test_criterion_01_cp_collapse():
    t0 = time.perf_counter()
    dom, cod = opsys.full_real(2), opsys.full_real(3)
    worst_cb, worst_unit = 0.0, 0.0
    for t in range(25):
        u = rand_cp(_rng(1, t), dom, cod)
        dec = decnorm.dec_norm(u).value
        cb = decnorm.cb_norm(u)
        unit = mat.op_norm(u.at_identity)
        POOL.append(("cp_collapse", cb, dec))
        worst_cb = max(worst_cb, abs(dec - cb))
        worst_unit = max(worst_unit, abs(dec - unit))
    elapsed = time.perf_counter() - t0
    ok = worst_cb <= 1e-5 and worst_unit <= 1e-5 and elapsed <= 60.0
    _announce(1, "CP collapse: dec = cb = ||u(1)|| on 25 Kraus-built CP maps", ok,
              f"max|dec-cb|={worst_cb:.2e}, max|dec-unit|={worst_unit:.2e}, {elapsed:.1f}s")


def test_criterion_02_complexification_isometry():
    dom = opsys.full_real(2)
    worst = 0.0
    for t in range(25):
        u = rand_map(_rng(2, t), dom, dom)
        dec = decnorm.dec_norm(u).value
        dec_c = decnorm.dec_norm(opsys.complexify_map(u)).value
        POOL.append(("complexification", decnorm.cb_norm(u), dec))
        worst = max(worst, abs(dec - dec_c))
    ok = worst <= 1e-5
    _announce(2, "complexification isometry: dec(u) = dec(u_c) on 25 maps", ok,
              f"max diff={worst:.2e}")


def test_criterion_04_injective_codomain():
    targets = [(opsys.full_real(2), opsys.full_real(2)),
               (opsys.full_real(2), opsys.full_real(3)),
               (opsys.full_real(3), opsys.full_real(2))]
    worst = 0.0
    for t in range(25):
        dom, cod = targets[t % 3]
        u = rand_map(_rng(4, t), dom, cod)
        dec = decnorm.dec_norm(u).value
        cb = decnorm.cb_norm(u)
        POOL.append(("injective", cb, dec))
        worst = max(worst, abs(dec - cb))
    ok = worst <= 1e-5
    _announce(4, "injective codomain: dec = cb on 25 maps into full algebras", ok,
              f"max diff={worst:.2e}")


def test_criterion_05_quaternion_dimensions():
    rep = suite.run_suite("quaternion_dims", seed=1, trials=1)
    vals = rep.records[0]["values"]
    ok = rep.passed and (vals["sa_dim"], vals["as_dim"]) == (10, 6)
    _announce(5, "quaternion map space splits as (sa, as) = (10, 6)", ok,
              f"got ({vals['sa_dim']:g}, {vals['as_dim']:g})")


def test_criterion_06_jordan_coherence():
    dom = opsys.full_real(2)
    eps = np.finfo(float).eps
    worst_rec, worst_sa, worst_as = 0.0, 0.0, 0.0
    for t in range(25):
        u = rand_map(_rng(6, t), dom, dom)
        u_sa, u_as = decnorm.jordan_split(u)
        rec = max(float(np.abs(a + b - c).max())
                  for a, b, c in zip(u_sa.images, u_as.images, u.images))
        worst_rec = max(worst_rec, rec)
        dec_sa = decnorm.dec_norm(u_sa).value
        worst_sa = max(worst_sa, abs(decnorm.sa_difference_norm(u_sa) - dec_sa))
        dec_as = decnorm.dec_norm(u_as).value
        _, wit = decnorm.skew_witness(u_as)
        worst_as = max(worst_as, abs(wit - dec_as))
        POOL.append(("jordan_sa", decnorm.cb_norm(u_sa), dec_sa))
    ok = worst_rec <= 2 * eps and worst_sa <= 1e-5 and worst_as <= 1e-5
    _announce(6, "Jordan coherence: exact split, sa/skew programs match dec", ok,
              f"recombine={worst_rec:.1e}, sa={worst_sa:.2e}, skew={worst_as:.2e}")


def test_criterion_07_skew_identities():
    dom = opsys.full_real(2)
    worst_sum, worst_c = 0.0, 0.0
    for t in range(25):
        rng = _rng(7, t)
        _, u = decnorm.jordan_split(rand_map(rng, dom, dom))
        _, norms = decnorm.scp_complete(u)
        worst_sum = max(worst_sum, abs(norms["block_norm"] - (norms["dec"] + norms["unit_norm"])))
        n = int(rng.integers(2, 5))
        x = rng.standard_normal((n, n))
        x = x - x.T
        lhs = mat.op_norm(mat.realify((np.eye(n), x)))
        worst_c = max(worst_c, abs(lhs - (1.0 + mat.op_norm(x))))
    ok = worst_sum <= 1e-5 and worst_c <= 1e-8
    _announce(7, "skew identities: ||c(s(1),u(1))|| = dec + ||u(1)||; ||c(1,x)|| = 1 + ||x||",
              ok, f"sum={worst_sum:.2e}, spectral={worst_c:.2e}")


def test_criterion_08_scp_stinespring():
    dom = opsys.full_real(2)
    worst_resid, worst_tn = 0.0, 0.0
    for t in range(10):
        _, u = decnorm.jordan_split(rand_map(_rng(8, t), dom, dom))
        data = decnorm.stinespring_scp(u)
        cb = decnorm.cb_norm(u)
        POOL.append(("stinespring", cb, decnorm.dec_norm(u).value))
        worst_resid = max(worst_resid, data.residual)
        worst_tn = max(worst_tn, abs(data.t_norm_sq - (cb + mat.op_norm(u.at_identity))))
    ok = worst_resid <= 1e-6 and worst_tn <= 1e-5
    _announce(8, "skew Stinespring: reconstruction and ||T||^2 = cb + ||u(1)||", ok,
              f"resid={worst_resid:.2e}, identity={worst_tn:.2e}")


def test_criterion_09_real_gap_exhibit():
    sigma = opsys.canonical_map("sigma", opsys.complex_full(2))
    dec = decnorm.dec_norm(sigma).value
    cb = decnorm.cb_norm(sigma)
    POOL.append(("real_gap", cb, dec))
    skew_ok = cpmap.is_skew(sigma, tol=1e-10)
    u_sa, _ = decnorm.jordan_split(sigma)
    sa_norm = opsys.map_dist(u_sa, opsys.zero_map(sigma.domain, sigma.codomain))
    ok = abs(dec - 1.0) <= 1e-5 and abs(cb - 1.0) <= 1e-5 and skew_ok and sa_norm <= 1e-10
    _announce(9, "imaginary-part map: dec = cb = 1, skew, zero selfadjoint part", ok,
              f"dec={dec:.8f}, cb={cb:.8f}, sa_norm={sa_norm:.1e}")


def test_criterion_10_transpose_benchmark():
    v = opsys.full_real(2)
    tr = opsys.LinearMap(v, v, tuple(b.T for b in v.basis))
    dec = decnorm.dec_norm(tr).value
    cb = decnorm.cb_norm(tr)
    POOL.append(("transpose", cb, dec))
    ok = abs(dec - 2.0) <= 1e-4 and abs(cb - 2.0) <= 1e-4
    _announce(10, "transpose on M_2(R): dec = cb = 2", ok, f"dec={dec:.8f}, cb={cb:.8f}")


def test_criterion_11_ruan_direct_sum():
    dom = opsys.full_real(2)
    worst_sum, worst_scale, worst_comp = 0.0, 0.0, 0.0
    for t in range(25):
        rng = _rng(11, t)
        u = rand_map(rng, dom, opsys.full_real(2))
        v = rand_map(rng, dom, opsys.full_real(3))
        up = rand_map(rng, dom, opsys.full_real(2))
        alpha, beta = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))

        dec_u = decnorm.dec_norm(u).value
        dec_v = decnorm.dec_norm(v).value
        w = opsys.direct_sum_map(u, v)
        dec_w = decnorm.dec_norm(w).value
        worst_sum = max(worst_sum, abs(dec_w - max(dec_u, dec_v)))

        scaled = opsys.LinearMap(dom, opsys.full_real(2),
                                 tuple(alpha @ x @ beta for x in u.images))
        dec_scaled = decnorm.dec_norm(scaled).value
        worst_scale = max(worst_scale,
                          dec_scaled - mat.op_norm(alpha) * dec_u * mat.op_norm(beta))

        dec_comp = decnorm.dec_norm(opsys.compose(up, u)).value
        worst_comp = max(worst_comp, dec_comp - decnorm.dec_norm(up).value * dec_u)
    ok = worst_sum <= 1e-5 and worst_scale <= 1e-7 and worst_comp <= 1e-7
    _announce(11, "Ruan axioms: ||u(+)v|| = max; scaling and composition bounds", ok,
              f"sum={worst_sum:.2e}, scale slack={worst_scale:.2e}, comp slack={worst_comp:.2e}")


def test_criterion_12_delta_bound():
    dom, cod = opsys.ell_inf(3), opsys.full_real(2)
    worst = -np.inf
    for t in range(10):
        rng = _rng(12, t)
        u = rand_map(rng, dom, cod)
        dec = decnorm.dec_norm(u).value
        for _ in range(5):
            pairs = []
            for img in u.images:
                a = rng.standard_normal((2, 2)) + 3.0 * np.eye(2)
                pairs.append((a, np.linalg.solve(a, img)))
            val = decnorm.delta_value(decnorm.Factorization(tuple(pairs)), u=u)
            worst = max(worst, dec - val)
    ok = worst <= 1e-7
    _announce(12, "delta factorization value dominates dec on l^inf_3 maps", ok,
              f"max(dec - delta)={worst:.2e}")


def test_criterion_03_ordering_across_run():
    rep = suite.run_suite("ordering", seed=3, trials=48, tol=1e-5)
    for r in rep.records:
        assert r["status"] != "indeterminate"
        POOL.append(("ordering_suite", r["values"]["cb"], r["values"]["dec"]))
    violations = [(lbl, cb, dec) for lbl, cb, dec in POOL if cb > dec + 1e-7]
    ok = len(POOL) >= 150 and not violations
    _announce(3, "ordering: cb <= dec + 1e-7 across every computed instance", ok,
              f"{len(POOL)} instances, {len(violations)} violations")


def test_criterion_13_solver_battery_and_budget():
    rng = np.random.default_rng(113)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 33))
        a = rng.standard_normal((n, n))
        a = a + a.T
        sol = sdp.solve(sdp.lambda_max_problem(a))
        assert sol.status == "optimal"
        worst = max(worst, abs(sol.objective_value - mat.sym_eig(a)[0][0]))

    a = rng.standard_normal((8, 8))
    a = a + a.T
    p = sdp.lambda_max_problem(a)
    s1, s2 = sdp.solve(p), sdp.solve(p)
    deterministic = (s1.objective_value == s2.objective_value
                     and np.array_equal(s1.y, s2.y))
    v = opsys.full_real(2)
    u = rand_map(np.random.default_rng(113), v, v)
    deterministic &= decnorm.dec_norm(u).value == decnorm.dec_norm(u).value

    elapsed = time.perf_counter() - START
    ok = worst <= 1e-7 and deterministic and elapsed <= 600.0
    _announce(13, "solver battery: 50 lambda_max programs, bitwise determinism, "
                  "10-minute budget", ok,
              f"max err={worst:.2e}, deterministic={deterministic}, total={elapsed:.0f}s")
