import random
from fractions import Fraction as F

import pytest

from discforms import fqm, weil
from discforms.cyclo import e_frac
from discforms.errors import PreconditionError
from helpers import random_module


def test_metaplectic_group_relations():
    t, s, z = weil.gen_T(), weil.gen_S(), weil.gen_Z()
    assert s @ s == z
    st = s @ t
    assert st @ st @ st == z
    zz = z @ z
    assert zz.matrix == ((1, 0), (0, 1)) and zz.bit == 1
    assert (zz @ zz).bit == 0
    assert (s @ s.inverse()).matrix == ((1, 0), (0, 1))


def test_rho_T():
    a = fqm.trivial_module()
    assert weil.rho_T(a).is_identity()
    a2 = fqm.cyclic_module(2, F(1, 4))
    m = weil.rho_T(a2)
    assert m.entry(0, 0) == 1 and m.entry(1, 1) == e_frac(F(1, 4))
    b = fqm.fqm_from_gram([[2, 1], [1, 2]])
    assert weil.rho_T(b, b.level()).is_identity()


def test_rho_S_trivial():
    assert weil.rho_S(fqm.trivial_module()).is_identity()


@pytest.mark.parametrize("seed", range(4))
def test_relations_on_random_modules(seed):
    rng = random.Random(400 + seed)
    for _ in range(5):
        a = random_module(rng, max_order=36)
        rep = weil.relation_report(a)
        assert all(rep.values()), (a.orders, rep)


def test_direct_braid_cube_small():
    for a in (fqm.cyclic_module(3, F(1, 3)),
              fqm.cyclic_module(4, F(3, 8)),
              fqm.hyperbolic_module(3),
              fqm.fqm_from_gram([[4]])):
        s = weil.rho_S(a)
        st = s @ weil.rho_T(a)
        assert (st @ st @ st) == weil.rho_Z(a)
        assert (s @ s) == weil.rho_Z(a)


def test_rho_of_generator_and_words():
    a = fqm.hyperbolic_module(5)
    assert weil.rho_of(a, weil.gen_T()) == weil.rho_T(a)
    g = weil.gen_S() @ weil.gen_T() @ weil.gen_T()
    assert weil.rho_of(a, g) == weil.rho_S(a) @ weil.rho_T(a) @ weil.rho_T(a)


def test_rho_of_trivial_on_congruence_subgroup():
    # even-signature module: both metaplectic lifts act as the identity
    a = fqm.hyperbolic_module(5)
    assert a.signature() % 2 == 0
    for mat in (((1, 5), (0, 1)), ((1, 0), (5, 1)), ((26, 5), (5, 1)), ((-4, 5), (-5, 6))):
        assert weil.rho_of(a, weil.MetaplecticElement(mat)).is_identity()


def test_rho_of_odd_signature_scalar_on_congruence():
    # one of the two lifts acts trivially; the other by the central scalar
    a = fqm.fqm_from_gram([[2]])  # level 4, signature 1
    ident = weil.identity_matrix(a)
    neg = ident.scaled(e_frac(F(-a.signature(), 2)))
    for mat in (((1, 4), (0, 1)), ((1, 0), (4, 1)), ((5, 4), (16, 13))):
        m = weil.rho_of(a, weil.MetaplecticElement(mat))
        assert m == ident or m == neg


def test_rho_of_rejects_non_unimodular():
    with pytest.raises(PreconditionError):
        weil.MetaplecticElement(((2, 0), (0, 1)))


def test_rho_of_other_lift_differs_by_central_scalar():
    a = fqm.fqm_from_gram([[2]])
    lifted = weil.rho_of(a, weil.MetaplecticElement(((1, 1), (0, 1)), bit=1))
    assert lifted == weil.rho_T(a).scaled(e_frac(F(-a.signature(), 2)))


def test_aut_identity_and_negation():
    a = fqm.hyperbolic_module(4)
    ident = weil.aut_matrix(a, fqm.identity_automorphism(a))
    assert ident.is_identity()
    p = weil.aut_matrix(a, fqm.negation_automorphism(a))
    assert p == weil.rho_Z(a).scaled(e_frac(F(a.signature(), 4)))


def test_phi_r_commutes_with_S():
    a = fqm.hyperbolic_module(7)
    m = weil.aut_matrix(a, fqm.phi_r(a, 3))
    s = weil.rho_S(a)
    t = weil.rho_T(a)
    assert (m @ s) == (s @ m)
    assert (m @ t) == (t @ m)


def test_duality_with_negated_module():
    for a in (fqm.cyclic_module(3, F(1, 3)), fqm.hyperbolic_module(4),
              fqm.fqm_from_gram([[2]])):
        s = weil.rho_S(a)
        s_neg = weil.rho_S(fqm.negate(a))
        conj = weil.WeilMatrix(a, s.scale.conjugate(),
                               [[x.conjugate() for x in row] for row in s.mat], s.mod)
        # entries of the negated module's S matrix equal the conjugates
        n = s.size
        for i in range(n):
            for j in range(n):
                assert (s_neg.entry(i, j) - conj.entry(i, j)).is_zero()


def test_plus_subspace_dimensions():
    reps, w, _t, _s, _st = weil.plus_subspace(fqm.trivial_module(), F(12))
    assert len(reps) == 1 and w == [1]
    reps, w, *_ = weil.plus_subspace(fqm.cyclic_module(3, F(1, 3)), F(1))
    assert len(reps) == 2 and w == [1, 2]


def test_plus_subspace_parity_guard():
    with pytest.raises(PreconditionError):
        weil.plus_subspace(fqm.cyclic_module(3, F(1, 3)), F(2))


def test_plus_subspace_restricted_unitarity():
    rng = random.Random(77)
    checked = 0
    while checked < 6:
        a = random_module(rng, max_order=30)
        sig = a.signature()
        k = F(sig, 2) if sig % 2 == 0 else F(sig, 2)
        if (2 * k - sig) % 4 != 0:
            continue
        reps, w, tm, sm, stm = weil.plus_subspace(a, k)
        n = len(reps)
        for m in (tm, sm, stm):
            for i in range(n):
                for j in range(n):
                    tot = sum(m.entry(t, i).conjugate() * m.entry(t, j) * w[t]
                              for t in range(n))
                    want = w[i] if i == j else 0
                    assert (tot - want).is_zero()
        checked += 1


def test_z_squared_scalar():
    a = fqm.fqm_from_gram([[2]])
    z = weil.rho_Z(a)
    assert (z @ z) == weil.identity_matrix(a).scaled(e_frac(F(-a.signature(), 2)))
