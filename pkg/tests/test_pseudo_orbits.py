from fractions import Fraction

import pytest

from shadowdyn.pseudo_orbits import (
    PseudoOrbitError,
    concatenate,
    connect,
    orbit_segment,
    periodic_extension,
    repeat,
    validate,
)
from shadowdyn.systems import SymbolicPoint, SymbolicSystem, circle_net

F = Fraction


@pytest.fixture
def sigma2():
    return SymbolicSystem.full_shift(2)


def test_true_orbit_is_zero_pseudo_orbit(sigma2):
    x = sigma2.point((0, 1, 1))
    po = orbit_segment(sigma2, x, 3)
    assert po.delta == 0
    assert po.reverify()
    assert validate(po.points, 0, sigma2).step_count == 3


def test_symbolic_validation_example(sigma2):
    # (0^inf, p) with p reading all zeros except a 1 at coordinate 3
    zero = sigma2.point((0,))
    p = sigma2.point((0,), word=(1,), offset=3)
    assert p.coord(3) == 1 and p.window(-2, 2) == (0, 0, 0, 0, 0)
    po = validate([zero, p], F(1, 4), sigma2)
    assert po.step_count == 1
    with pytest.raises(PseudoOrbitError) as err:
        validate([zero, p], F(1, 16), sigma2)
    assert err.value.first_bad_index == 0
    assert err.value.worst_error == F(1, 8)


def test_concatenate_adds_steps_and_maxes_delta(sigma2):
    a = sigma2.fixed_point(0)
    x = validate([a, a, a, a], F(1, 10), sigma2)     # 3-step loop at a
    y = validate([a, a, a, a, a], F(1, 20), sigma2)  # 4-step loop at a
    z = concatenate(x, y)
    assert z.step_count == 7
    assert z.kind == "loop"
    assert z.delta == F(1, 10)


def test_concatenate_requires_matching_endpoints(sigma2):
    a = sigma2.fixed_point(0)
    b = sigma2.point((0, 1))
    x = validate([a, a], F(1, 2), sigma2)
    y = validate([b, b.shift(1)], 0, sigma2)
    with pytest.raises(ValueError):
        concatenate(x, y)


def test_concatenate_associative(sigma2):
    a = sigma2.fixed_point(0)
    x = validate([a, a], F(1, 8), sigma2)
    y = validate([a, a, a], F(1, 4), sigma2)
    z = validate([a, a, a, a], 0, sigma2)
    left = concatenate(concatenate(x, y), z)
    right = concatenate(x, concatenate(y, z))
    assert left.points == right.points
    assert left.delta == right.delta


def test_repeat(sigma2):
    a = sigma2.fixed_point(1)
    loop = validate([a, a, a], F(1, 4), sigma2)
    assert repeat(loop, 1).points == loop.points
    tripled = repeat(loop, 3)
    assert tripled.step_count == 3 * loop.step_count
    n = loop.step_count
    doubled = repeat(loop, 2)
    for i in range(2 * n):
        assert doubled.points[i] == loop.points[i % n]
    with pytest.raises(ValueError):
        repeat(loop, 0)
    seg = validate([a, a.shift(1)], 0, sigma2, kind="segment")
    with pytest.raises(ValueError):
        repeat(seg, 2)


def test_repeat_equals_self_concatenation(sigma2):
    p = sigma2.point((0, 1))
    loop = validate([p, p.shift(1), p], 0, sigma2)
    assert repeat(loop, 3).points == concatenate(concatenate(loop, loop), loop).points


def test_periodic_extension(sigma2):
    a = sigma2.fixed_point(0)
    const = validate([a, a], 0, sigma2)
    gen = periodic_extension(const)
    assert [next(gen) for _ in range(5)] == [a] * 5

    p = sigma2.point((0, 1))
    two = validate([p, p.shift(1), p], 0, sigma2)
    gen = periodic_extension(two)
    prefix = [next(gen) for _ in range(two.step_count + 1)]
    assert prefix == list(two.points)


def flow_circle(size=36):
    # simple monotone net flow with a fixed point at 0
    def step(i):
        return i if i == 0 else (i + 1) % size
    return circle_net(size, step)


def test_connect_one_step():
    net = flow_circle()
    for a in (3, 17):
        po = connect(a, net.step(a), F(0), net)
        assert po is not None
        assert po.points == (a, net.step(a))


def test_connect_follows_flow_and_fails_against_it():
    net = flow_circle()
    po = connect(1, 5, F(0), net)
    assert po is not None and po.step_count == 4
    # against the flow with delta = 0 there is no chain into the source side
    assert connect(5, 1, F(0), net) is None


def test_connect_self_chain_has_steps():
    net = flow_circle()
    po = connect(0, 0, F(0), net)  # fixed point: 1-step loop
    assert po is not None and po.step_count == 1 and po.kind == "loop"
    assert connect(4, 4, F(0), net) is None  # non-recurrent at delta 0


def test_connect_minimality_against_exhaustive():
    net = flow_circle(12)
    delta = F(1, 12)

    def exhaustive_shortest(a, b, max_len=8):
        frontier = {(a,)}
        for length in range(max_len + 1):
            for path in sorted(frontier):
                if path[-1] == b and len(path) > 1:
                    return len(path) - 1
            nxt = set()
            for path in frontier:
                for q in net.successors(path[-1], delta):
                    nxt.add(path + (q,))
            frontier = nxt
        return None

    for a, b in [(1, 4), (3, 3), (10, 2)]:
        po = connect(a, b, delta, net, max_len=8)
        oracle = exhaustive_shortest(a, b)
        if oracle is None:
            assert po is None
        else:
            assert po is not None and po.step_count == oracle
            assert po.reverify()
