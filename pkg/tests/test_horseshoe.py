import math
from fractions import Fraction

import pytest

from shadowdyn.horseshoe import (
    CertificateAborted,
    RecipeInapplicable,
    build_certificate,
    equalize,
    find_loop_family,
    make_family,
    nonminimal_recipe,
    sensitive_recipe,
    verify_semiconjugacy,
)
from shadowdyn.pseudo_orbits import orbit_segment, splice_chain, validate
from shadowdyn.shadow_search import shadows
from shadowdyn.systems import SymbolicSystem, circle_net

F = Fraction


@pytest.fixture(scope="module")
def sigma2():
    return SymbolicSystem.full_shift(2)


def two_loop_family(sigma2, eps=F(1, 5), delta=F(1, 32)):
    """Constant loop at 0^inf versus an excursion through a point reading a
    1 at coordinate 0; separated at the excursion's visit (distance 1)."""
    from shadowdyn.pseudo_orbits import concatenate

    x = sigma2.fixed_point(0)
    q = sigma2.point((0,), word=(1,), offset=0)
    c2 = concatenate(splice_chain(sigma2, x, q, delta),
                     splice_chain(sigma2, q, x, delta))
    c1 = validate([x] * (c2.step_count + 1), delta, sigma2)
    return make_family(sigma2, x, [c1, c2], eps, delta)


def test_family_construction_and_reverify(sigma2):
    fam = two_loop_family(sigma2)
    assert fam.k == 2
    assert fam.reverify()
    w = fam.witnesses[0]
    assert w.distance == 1 and w.distance > 4 * fam.epsilon


def test_equalize_lcm():
    sigma2 = SymbolicSystem.full_shift(2)
    x = sigma2.fixed_point(0)
    l2 = validate([x] * 3, 0, sigma2)
    l3 = validate([x] * 4, 0, sigma2)
    e2, e3 = equalize([l2, l3])
    assert e2.step_count == e3.step_count == 6


def test_find_loop_family_full_shift(sigma2):
    x = sigma2.fixed_point(0)
    fam = find_loop_family(x, F(1, 5), F(1, 16), n_max=24, k=2, system=sigma2)
    assert fam is not None
    assert fam.k == 2 and fam.reverify()


def test_find_loop_family_k1_trivial(sigma2):
    x = sigma2.fixed_point(1)
    fam = find_loop_family(x, F(1, 5), F(1, 16), n_max=12, k=1, system=sigma2)
    assert fam is not None and fam.k == 1
    assert math.log(fam.k) == 0


def test_find_loop_family_none_on_contracting_net():
    # all chain classes are fixed points: loops stay epsilon-close
    size = 36

    def step(i):
        if i in (0, 18):
            return i
        return i - 1 if i > 18 else i + 1 if i < 18 else i

    net = circle_net(size, lambda i: step(i) % size)
    fam = find_loop_family(0, F(1, 10), F(1, 200), n_max=10, k=2, system=net)
    assert fam is None


def test_certificate_codes_all_words(sigma2):
    fam = two_loop_family(sigma2)
    cert = build_certificate(fam, word_length_max=4)
    n_words = sum(2 ** l for l in range(1, 5))
    assert len(cert.coded) == n_words
    assert cert.reverify()
    assert cert.entropy_log_arg == 2
    assert cert.entropy_divisor == fam.n
    assert cert.entropy_lower_bound == pytest.approx(math.log(2) / fam.n)


def test_certificate_separation_counts(sigma2):
    fam = two_loop_family(sigma2)
    cert = build_certificate(fam, word_length_max=4)
    for length in (2, 3, 4):
        assert cert.separated_pair_count(length) == 2 ** length


def test_certificate_word_length_zero(sigma2):
    fam = two_loop_family(sigma2)
    cert = build_certificate(fam, word_length_max=0)
    assert cert.coded == {}
    assert cert.entropy_lower_bound > 0


def test_semiconjugacy_pass_and_corruption(sigma2):
    fam = two_loop_family(sigma2)
    cert = build_certificate(fam, word_length_max=3)
    rep = verify_semiconjugacy(cert)
    assert rep.ok and rep.checked == 4 + 8

    # corrupt one coded point: fail at that word
    bad_word = (1, 0, 1)
    from shadowdyn.shadow_search import ShadowWitness

    corrupted = ShadowWitness(sigma2.fixed_point(1), fam.epsilon, (0, 1))
    cert.coded[bad_word] = corrupted
    rep2 = verify_semiconjugacy(cert)
    assert not rep2.ok
    assert any(w == bad_word for w, _ in rep2.failures)
    assert not cert.reverify()


def test_single_word_semiconjugacy_vacuous(sigma2):
    fam = two_loop_family(sigma2)
    cert = build_certificate(fam, word_length_max=1)
    rep = verify_semiconjugacy(cert)
    assert rep.ok and rep.checked == 0


def test_nonminimal_recipe_golden_mean():
    gm = SymbolicSystem.golden_mean()
    z = gm.point((0, 1))          # periodic point off the fixed point
    k_point = gm.fixed_point(0)   # proper minimal subset {0^inf}
    delta = F(1, 64)
    fam = nonminimal_recipe(z, [k_point], delta, gm)
    assert fam.k == 2
    assert fam.epsilon == gm.distance(z, k_point) / 5
    assert fam.reverify()
    cert = build_certificate(fam, word_length_max=2)
    assert verify_semiconjugacy(cert).ok


def test_nonminimal_recipe_net_figure_eight():
    # identity map: every point is fixed and delta-chains run both ways
    size = 120
    net = circle_net(size, lambda i: i, invertible=True)
    delta = F(1, 120)
    fam = nonminimal_recipe(60, [0], delta, net,
                            class_nodes=range(size), z=60)
    assert fam.k == 2 and fam.reverify()
    assert fam.epsilon == F(1, 10)


def test_nonminimal_recipe_inapplicable_on_singleton():
    size = 36

    def step(i):
        if i in (0, 18):
            return i
        return i + 1 if i < 18 else i - 1

    net = circle_net(size, lambda i: step(i) % size)
    with pytest.raises(RecipeInapplicable):
        nonminimal_recipe(0, [0], F(1, 400), net, class_nodes=[0])


def test_sensitive_recipe_full_shift(sigma2):
    x = sigma2.fixed_point(0)
    # depth-3 cylinder around x: points agreeing with x on |j| <= 3
    hood = [x]
    for w in sigma2.words(3):
        q = sigma2.periodic_closure((0, 0, 0, 0, 0, 0, 0) + w, anchor=-3)
        if q is not None and q != x:
            hood.append(q)
    fam = sensitive_recipe(x, hood, constant=F(1, 2), system=sigma2,
                           delta=F(1, 8))
    assert fam.k == 2
    assert fam.epsilon < F(1, 8)
    assert fam.reverify()


def test_sensitive_recipe_inapplicable_on_cycle():
    net = circle_net(8, lambda i: (i + 1) % 8, invertible=True)
    with pytest.raises(RecipeInapplicable):
        sensitive_recipe(0, [0, 1], constant=F(1, 2), system=net, delta=F(1, 4))


def test_sensitive_recipe_budget_error(sigma2):
    from shadowdyn.systems import BudgetExceeded

    x = sigma2.fixed_point(0)
    q = sigma2.point((0, 0, 0, 0, 0, 0, 1))
    with pytest.raises(BudgetExceeded):
        sensitive_recipe(x, [x, q], constant=F(1, 2), system=sigma2,
                         delta=F(1, 4), return_budget=3)
