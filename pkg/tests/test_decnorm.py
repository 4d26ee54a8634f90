import numpy as np
import pytest

from decmap import cpmap, decnorm, mat, opsys
from decmap.errors import PreconditionError, ValidationError


def rand_map(rng, dom, cod):
    images = [np.tensordot(rng.standard_normal(cod.dim), cod.onb_mats, axes=1)
              for _ in range(dom.dim)]
    u = opsys.LinearMap(dom, cod, tuple(images))
    scale = max(float(np.linalg.norm(x)) for x in u.images)
    return (1.0 / max(scale, 1e-2)) * u


def rand_cp(rng, dom, cod, r=2):
    kraus = [rng.standard_normal((dom.n, cod.n)) for _ in range(r)]
    images = tuple(sum(k.T @ b @ k for k in kraus) for b in dom.basis)
    u = opsys.LinearMap(dom, cod, images)
    return (1.0 / max(mat.op_norm(u.at_identity), 1e-2)) * u


def transpose_map(n=2):
    v = opsys.full_real(n)
    return opsys.LinearMap(v, v, tuple(b.T for b in v.basis))


# ---------------------------------------------------------------- dec_norm

def test_dec_identity_is_one():
    res = decnorm.dec_norm(opsys.identity_map(opsys.full_real(2)))
    assert res.value == pytest.approx(1.0, abs=1e-7)
    assert res.status == "optimal"


def test_dec_conjugation_bound():
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
    a /= mat.op_norm(a)
    b /= mat.op_norm(b)
    v = opsys.full_real(2)
    phi = opsys.LinearMap(v, v, tuple(a.T @ x @ b for x in v.basis))
    res = decnorm.dec_norm(phi)
    assert res.value <= 1.0 + 1e-6


def test_dec_imaginary_part_is_one():
    sigma = opsys.canonical_map("sigma", opsys.complex_full(2))
    res = decnorm.dec_norm(sigma)
    assert res.value == pytest.approx(1.0, abs=1e-6)


def test_dec_witnesses_certify():
    rng = np.random.default_rng(1)
    v = opsys.full_real(2)
    u = rand_map(rng, v, v)
    res = decnorm.dec_norm(u)
    # witness pair really witnesses: the assembled block map is CP
    block = opsys.block2_map(res.s1, u, cpmap.involute(u), res.s2)
    assert cpmap.is_cp(block, tol=1e-6).holds is True
    top = max(mat.op_norm(res.s1.at_identity), mat.op_norm(res.s2.at_identity))
    assert top <= res.value + 1e-6
    assert res.residuals["min_block_eig"] >= -1e-8


def test_dec_subsystem_codomain_runs():
    rng = np.random.default_rng(2)
    x = rng.standard_normal((3, 3))
    sub = opsys.span_system([np.eye(3), x, x.T], label="sub3")
    u = rand_map(rng, opsys.full_real(2), sub)
    res = decnorm.dec_norm(u)
    assert res.status in ("optimal", "not_decomposable")
    if res.status == "optimal":
        for img in res.s1.images:
            assert sub.contains(img)


# ---------------------------------------------------------------- cb_norm

def test_cb_identity_is_one():
    assert decnorm.cb_norm(opsys.identity_map(opsys.full_real(2))) == pytest.approx(1.0, abs=1e-7)


def test_cb_of_cp_map_is_unit_value():
    rng = np.random.default_rng(3)
    for dom, cod in [(opsys.full_real(2), opsys.full_real(2)),
                     (opsys.full_real(2), opsys.full_real(3))]:
        u = rand_cp(rng, dom, cod)
        assert decnorm.cb_norm(u) == pytest.approx(mat.op_norm(u.at_identity), abs=1e-6)


def test_cb_transpose_is_two_and_collapses():
    tr = transpose_map(2)
    cb = decnorm.cb_norm(tr)
    dec = decnorm.dec_norm(tr).value
    assert cb == pytest.approx(2.0, abs=1e-6)
    assert dec == pytest.approx(2.0, abs=1e-6)
    assert cb <= dec + 1e-7


def test_cb_le_dec_on_samples():
    rng = np.random.default_rng(4)
    v = opsys.full_real(2)
    for _ in range(5):
        u = rand_map(rng, v, v)
        assert decnorm.cb_norm(u) <= decnorm.dec_norm(u).value + 1e-7


# ---------------------------------------------------------------- jordan split

def test_jordan_identity_and_im():
    v = opsys.full_real(2)
    sa, sk = decnorm.jordan_split(opsys.identity_map(v))
    assert opsys.map_dist(sa, opsys.identity_map(v)) <= 1e-15
    assert opsys.map_dist(sk, opsys.zero_map(v)) <= 1e-15

    sigma = opsys.canonical_map("sigma", opsys.complex_full(2))
    sa, sk = decnorm.jordan_split(sigma)
    assert opsys.map_dist(sa, opsys.zero_map(sigma.domain, sigma.codomain)) <= 1e-15
    assert opsys.map_dist(sk, sigma) <= 1e-15


def test_jordan_parts_and_recombination():
    rng = np.random.default_rng(5)
    v = opsys.full_real(2)
    eps = np.finfo(float).eps
    for _ in range(10):
        u = rand_map(rng, v, v)
        sa, sk = decnorm.jordan_split(u)
        assert opsys.map_dist(cpmap.involute(sa), sa) <= 1e-12
        assert opsys.map_dist(cpmap.involute(sk), -sk) <= 1e-12
        err = max(float(np.abs(a + b - c).max())
                  for a, b, c in zip(sa.images, sk.images, u.images))
        assert err <= 2 * eps


# ---------------------------------------------------------------- sa difference

def test_sa_difference_of_cp_map():
    rng = np.random.default_rng(6)
    u = rand_cp(rng, opsys.full_real(2), opsys.full_real(2))
    val = decnorm.sa_difference_norm(u)
    assert val == pytest.approx(mat.op_norm(u.at_identity), abs=1e-6)


def test_sa_difference_matches_dec_program():
    v = opsys.full_real(2)
    u = opsys.identity_map(v) - transpose_map(2)
    val = decnorm.sa_difference_norm(u)
    dec = decnorm.dec_norm(u).value
    assert val == pytest.approx(dec, abs=1e-5)


def test_sa_difference_zero_map():
    v = opsys.full_real(2)
    assert decnorm.sa_difference_norm(opsys.zero_map(v)) == pytest.approx(0.0, abs=1e-7)


def test_sa_difference_rejects_non_selfadjoint():
    sigma = opsys.canonical_map("sigma", opsys.complex_full(2))
    with pytest.raises(PreconditionError):
        decnorm.sa_difference_norm(sigma)


# ---------------------------------------------------------------- skew programs

def test_skew_witness_zero():
    v = opsys.full_real(2)
    _, val = decnorm.skew_witness(opsys.zero_map(v))
    assert val == pytest.approx(0.0, abs=1e-7)


def test_skew_witness_imaginary_part():
    sigma = opsys.canonical_map("sigma", opsys.complex_full(2))
    s, val = decnorm.skew_witness(sigma)
    assert val == pytest.approx(1.0, abs=1e-5)
    block = opsys.block2_map(s, -sigma, sigma, s)  # c(s, u) layout
    assert cpmap.is_cp(block, tol=1e-6).holds is True


def test_skew_witness_homogeneous_and_average():
    rng = np.random.default_rng(7)
    v = opsys.full_real(2)
    _, u = decnorm.jordan_split(rand_map(rng, v, v))
    _, val = decnorm.skew_witness(u)
    _, val3 = decnorm.skew_witness(3.0 * u)
    assert val3 == pytest.approx(3.0 * val, abs=1e-5)
    _, val_avg = decnorm.skew_witness(u, method="average")
    assert val_avg == pytest.approx(val, abs=1e-5)


def test_skew_witness_rejects_non_skew():
    with pytest.raises(PreconditionError):
        decnorm.skew_witness(opsys.identity_map(opsys.full_real(2)))


# ---------------------------------------------------------------- icp extraction

def test_icp_extract_of_real_complexification_is_zero():
    rng = np.random.default_rng(8)
    v = opsys.full_real(2)
    psi = rand_cp(rng, v, v)
    phi = opsys.complexify_map(psi)
    sigma = decnorm.icp_extract(phi)
    assert opsys.map_dist(sigma, opsys.zero_map(v)) <= 1e-10


def test_icp_extract_inner_to_outer_homomorphism():
    # the *-homomorphism trading the inner complex unit for the outer one has
    # imaginary part exactly the realified entrywise imaginary part
    v = opsys.forget_complex_structure(opsys.complex_full(2))
    vc = opsys.complexify_system(v)
    zero2 = np.zeros((2, 2))
    images = []
    for b in v.basis:  # c(b, 0) -> c(Re_r(b), Im_r(b))
        x, y = mat.split_realified(b)
        images.append(mat.realify((mat.realify((x, zero2)), mat.realify((y, zero2)))))
    j = vc.complex_structure
    images += [j @ z for z in images[:len(v.basis)]]
    phi = opsys.LinearMap(vc, vc, tuple(images))
    assert cpmap.is_cp(phi, tol=1e-7).holds is True
    sigma = decnorm.icp_extract(phi)
    # oracle: evaluate on the basis; expect c(x, y) -> c(y, 0)
    for b in v.basis:
        x, y = mat.split_realified(b)
        np.testing.assert_allclose(sigma(b), mat.realify((y, zero2)), atol=1e-10)


def test_icp_extract_random_cp_bound():
    rng = np.random.default_rng(9)
    v = opsys.full_real(2)
    vc = opsys.complexify_system(v)
    # complex Kraus conjugation, realified: CP and complex-linear
    kraus = [mat.realify((rng.standard_normal((2, 2)), rng.standard_normal((2, 2))))
             for _ in range(2)]
    images = tuple(sum(k.T @ b @ k for k in kraus) for b in vc.basis)
    phi = opsys.LinearMap(vc, vc, images)
    sigma = decnorm.icp_extract(phi)
    assert cpmap.is_skew(sigma)
    dec = decnorm.dec_norm(sigma).value
    assert dec <= mat.op_norm(phi.at_identity) + 1e-6


def test_icp_extract_rejects_non_complex_linear():
    v = opsys.full_real(2)
    vc = opsys.complexify_system(v)
    images = [np.array(b) for b in vc.basis]
    images[-1] = 0.5 * images[-1]  # break J-linearity
    phi = opsys.LinearMap(vc, vc, tuple(images))
    with pytest.raises(Exception):
        decnorm.icp_extract(phi)


# ---------------------------------------------------------------- completions

def test_scp_complete_zero_map():
    v = opsys.full_real(2)
    s, norms = decnorm.scp_complete(opsys.zero_map(v))
    assert norms["dec"] == pytest.approx(0.0, abs=1e-6)
    assert norms["unit_norm"] == 0.0
    assert opsys.map_dist(s, opsys.zero_map(v)) <= 1e-5


def test_scp_complete_imaginary_part_unital():
    sigma = opsys.canonical_map("sigma", opsys.complex_full(2))
    s, norms = decnorm.scp_complete(sigma)
    assert norms["flavor"] == "unital"
    np.testing.assert_allclose(s.at_identity, np.eye(2), atol=1e-6)
    block = opsys.block2_map(s, -sigma, sigma, s)  # c(s, u)
    assert cpmap.is_cp(block, tol=1e-6).holds is True
    np.testing.assert_allclose(block.at_identity, np.eye(4), atol=1e-6)


def test_scp_complete_sum_identity():
    rng = np.random.default_rng(10)
    v = opsys.full_real(2)
    for _ in range(3):
        _, u = decnorm.jordan_split(rand_map(rng, v, v))
        s, norms = decnorm.scp_complete(u)
        assert norms["flavor"] == "scaled"
        np.testing.assert_allclose(s.at_identity, norms["dec"] * np.eye(2), atol=1e-6)
        assert norms["block_norm"] == pytest.approx(norms["dec"] + norms["unit_norm"], abs=1e-5)


def test_scp_complete_rejects_non_skew():
    with pytest.raises(PreconditionError):
        decnorm.scp_complete(opsys.identity_map(opsys.full_real(2)))


# ---------------------------------------------------------------- stinespring

def test_stinespring_zero():
    v = opsys.full_real(2)
    data = decnorm.stinespring_scp(opsys.zero_map(v))
    assert data.t_norm_sq == pytest.approx(0.0, abs=1e-6)


def test_stinespring_imaginary_part():
    sigma = opsys.canonical_map("sigma", opsys.complex_full(2))
    data = decnorm.stinespring_scp(sigma)
    assert data.t_norm_sq == pytest.approx(1.0, abs=1e-5)
    assert data.residual <= 1e-6


def test_stinespring_random_skew():
    rng = np.random.default_rng(11)
    v = opsys.full_real(2)
    _, u = decnorm.jordan_split(rand_map(rng, v, v))
    data = decnorm.stinespring_scp(u)
    target = decnorm.cb_norm(u) + mat.op_norm(u.at_identity)
    assert abs(data.t_norm_sq - target) <= 1e-5
    assert data.residual <= 1e-6
    # u is recovered from the lower-left corner of the Kraus reconstruction
    x = rng.standard_normal((2, 2))
    x = v.project(x)
    rebuilt = sum(k.T @ x @ k for k in data.kraus)
    np.testing.assert_allclose(rebuilt[2:, :2], u(x), atol=1e-6)


def test_stinespring_needs_full_codomain():
    sub = opsys.ell_inf(2)
    u = opsys.zero_map(opsys.full_real(2), sub)
    with pytest.raises(PreconditionError):
        decnorm.stinespring_scp(u)


# ---------------------------------------------------------------- delta

def test_delta_diagonal_factorization():
    dom = opsys.ell_inf(3)
    cod = opsys.full_real(3)
    images = tuple(np.array(b) for b in dom.basis)
    u = opsys.LinearMap(dom, cod, images)
    pairs = tuple((np.array(b), np.array(b)) for b in dom.basis)
    val = decnorm.delta_value(decnorm.Factorization(pairs), u=u)
    assert val == pytest.approx(1.0, abs=1e-10)
    assert decnorm.dec_norm(u).value == pytest.approx(1.0, abs=1e-6)


def test_delta_orthogonal_images():
    rng = np.random.default_rng(12)
    dom = opsys.ell_inf(3)
    cod = opsys.full_real(2)
    us = []
    for _ in range(3):
        q, _ = np.linalg.qr(rng.standard_normal((2, 2)))
        us.append(q)
    u = opsys.LinearMap(dom, cod, tuple(us))
    pairs = tuple((q, np.eye(2)) for q in us)
    val = decnorm.delta_value(decnorm.Factorization(pairs), u=u)
    assert val == pytest.approx(3.0, abs=1e-9)


def test_delta_dominates_dec():
    rng = np.random.default_rng(13)
    dom, cod = opsys.ell_inf(3), opsys.full_real(2)
    u = rand_map(rng, dom, cod)
    dec = decnorm.dec_norm(u).value
    for _ in range(5):
        pairs = []
        for img in u.images:
            a = rng.standard_normal((2, 2)) + 3.0 * np.eye(2)
            pairs.append((a, np.linalg.solve(a, img)))
        val = decnorm.delta_value(decnorm.Factorization(tuple(pairs)), u=u)
        assert val >= dec - 1e-7


def test_delta_rejects_inconsistent_pairs():
    dom = opsys.ell_inf(2)
    u = opsys.LinearMap(dom, opsys.full_real(2), tuple(np.array(b) for b in dom.basis))
    pairs = ((np.eye(2), np.eye(2)), (np.eye(2), np.eye(2)))  # product != u(e_2)
    with pytest.raises(ValidationError):
        decnorm.delta_value(decnorm.Factorization(pairs), u=u)
    with pytest.raises(ValidationError):
        decnorm.Factorization(((np.ones((2, 3)), np.ones((2, 2))),))


# ---------------------------------------------------------------- structure facts

def test_restriction_monotone():
    rng = np.random.default_rng(14)
    v = opsys.full_real(3)
    u = rand_map(rng, v, opsys.full_real(2))
    x = rng.standard_normal((3, 3))
    sub = opsys.span_system([np.eye(3), x, x.T], label="sub3")
    dec_full = decnorm.dec_norm(u).value
    dec_sub = decnorm.dec_norm(opsys.restrict_map(u, sub)).value
    assert dec_sub <= dec_full + 1e-6


def test_complexification_isometry_spot():
    rng = np.random.default_rng(15)
    v = opsys.full_real(2)
    u = rand_map(rng, v, v)
    d1 = decnorm.dec_norm(u).value
    d2 = decnorm.dec_norm(opsys.complexify_map(u)).value
    assert abs(d1 - d2) <= 1e-5


def test_complexify_map_restricts_and_is_cb_isometric():
    rng = np.random.default_rng(18)
    v, w = opsys.full_real(1), opsys.full_real(2)
    a = rng.standard_normal((2, 2))
    u = opsys.LinearMap(v, w, (a,))
    uc = opsys.complexify_map(u)
    # restriction along kappa recovers u
    kappa = opsys.canonical_map("kappa", v)
    rho = opsys.canonical_map("rho", uc.codomain)
    assert opsys.map_dist(opsys.compose(rho, opsys.compose(uc, kappa)), u) <= 1e-12
    # cb is preserved (kept to a scalar domain to stay desk-scale)
    assert decnorm.cb_norm(u) == pytest.approx(mat.op_norm(a), abs=1e-6)
    assert decnorm.cb_norm(uc) == pytest.approx(mat.op_norm(a), abs=1e-5)


def test_complexify_cp_map_stays_cp():
    rng = np.random.default_rng(19)
    u = rand_cp(rng, opsys.full_real(2), opsys.full_real(2))
    assert cpmap.is_cp(opsys.complexify_map(u)).holds is True


def test_complex_program_agrees_with_realified():
    rng = np.random.default_rng(16)
    vc = opsys.complex_full(2)
    re_im = [(rng.standard_normal((2, 2)), rng.standard_normal((2, 2))) for _ in range(4)]
    images = [mat.realify(p) for p in re_im]
    j = vc.complex_structure
    images += [j @ z for z in images[:4]]
    u = opsys.LinearMap(vc, vc, tuple(images))
    u = (1.0 / max(float(np.linalg.norm(x)) for x in u.images)) * u
    assert abs(decnorm.dec_norm(u).value - decnorm.complex_dec_norm(u)) <= 1e-5


def test_direct_sum_is_max():
    rng = np.random.default_rng(17)
    dom = opsys.full_real(2)
    u = rand_map(rng, dom, opsys.full_real(2))
    v = rand_map(rng, dom, opsys.full_real(3))
    w = opsys.direct_sum_map(u, v)
    dec_w = decnorm.dec_norm(w).value
    expected = max(decnorm.dec_norm(u).value, decnorm.dec_norm(v).value)
    assert dec_w == pytest.approx(expected, abs=1e-5)
