import random

import numpy as np
import pytest

from homcart.complexes import (
    ComplexError,
    Homotopy,
    ZZ,
    Zmod,
    cone,
    direct_sum,
    end_structure_mod_p,
    hom_group,
    homology,
    homotopic,
    identity_map,
    is_contractible,
    is_homotopy_equivalence,
    random_chain_map,
    random_complex,
    reduce_mod,
    shift,
    validate_data,
    zero_map,
)
from homcart.intmat import FGAbelianGroup, IntMatrix

from helpers import cmap, cpx, one_term, two_term
from oracles import homotopies_f2, is_homotopy_witness_f2


def test_validate_counterexample_family_member():
    # [Z --(-a^3; a^2)--> Z^2] for a = 3
    c = cpx({-1: 1, 0: 2}, {-1: [[-27], [9]]})
    assert validate_data(ZZ, {-1: 1, 0: 2}, {-1: IntMatrix([[-27], [9]])}).ok
    assert c.rank(-1) == 1 and c.rank(0) == 2


def test_validate_one_degree_ok():
    assert validate_data(ZZ, {5: 3}, {}).ok


def test_validate_identity_squared_fails_at_joint_degree():
    rep = validate_data(ZZ, {0: 1, 1: 1, 2: 1}, {0: IntMatrix([[1]]), 1: IntMatrix([[1]])})
    assert not rep.ok
    assert rep.degree == 0


def test_shift_two_term():
    c = two_term(-9, degrees=(0, 1))
    s = shift(c)
    assert s.rank(-1) == 1 and s.rank(0) == 1
    assert s.differential(-1) == IntMatrix([[9]])


def test_shift_zero_and_double():
    z = cpx({}, {})
    assert shift(z).is_zero()
    c = cpx({0: 2, 1: 1}, {0: [[3, 4]]})
    ss = shift(shift(c))
    assert ss.rank(-2) == 2 and ss.rank(-1) == 1
    assert ss.differential(-2) == IntMatrix([[3, 4]])


def test_cone_identity_contractible():
    c = one_term()
    cn, incl, proj = cone(identity_map(c))
    assert cn.rank(-1) == 1 and cn.rank(0) == 1
    assert cn.differential(-1) == IntMatrix([[1]])
    assert is_contractible(cn) is not None


def test_cone_matches_two_term_pattern():
    # cone of b : [Z --(-a^2)--> Z] -> [Z] is [Z --(b; a^2)--> Z^2]
    a, b = 3, 5
    x = two_term(-a * a, degrees=(0, 1))
    y = one_term()
    f = cmap(x, y, {0: [[b]]})
    cn, incl, proj = cone(f)
    assert cn.rank(-1) == 1 and cn.rank(0) == 2
    assert cn.differential(-1) == IntMatrix([[b], [a * a]])
    comp = proj.compose(incl)
    assert comp.is_zero()


def test_cone_zero_map_is_direct_sum():
    x, y = one_term(), one_term()
    f = zero_map(x, y)
    cn, _, _ = cone(f)
    assert cn == direct_sum(y, shift(x))


def test_homotopic_equal_maps_gives_zero_homotopy():
    c = two_term(4)
    f = identity_map(c)
    h = homotopic(f, f)
    assert h is not None
    assert all(m.is_zero() for m in h.components().values())


def test_homotopic_middle_square_shift():
    # c(g) and g'(b) on the square of the counterexample family, a = 3:
    # the difference is a^2 in one degree and is killed by h = (0 1)
    a = 3
    b_cx = cpx({-1: 1, 0: 2}, {-1: [[-a ** 3], [a * a]]})
    cprime = cpx({-1: 1})
    lhs = cmap(b_cx, cprime, {-1: [[(1 + a) * a]]})
    rhs = cmap(b_cx, cprime, {-1: [[a]]})
    h = homotopic(lhs, rhs)
    assert h is not None
    # re-verification happened at construction; check the shape of the witness
    assert h.component(0).shape == (1, 2)


def test_homotopic_identity_vs_zero_none():
    c = one_term()
    assert homotopic(identity_map(c), zero_map(c, c)) is None


def test_is_homotopy_equivalence_identity_and_zero():
    c = two_term(7)
    assert is_homotopy_equivalence(identity_map(c)) is not None
    z1 = one_term()
    assert is_homotopy_equivalence(zero_map(z1, z1)) is None


def test_homology_examples():
    assert homology(one_term())[0] == FGAbelianGroup(1)
    h = homology(two_term(9))
    assert h[0] == FGAbelianGroup(0)
    assert h[1] == FGAbelianGroup(0, (9,))
    cn, _, _ = cone(identity_map(two_term(5)))
    assert all(g.is_trivial() for g in homology(cn).values())


def test_homology_rejects_modular():
    c = one_term(ring=Zmod(4))
    with pytest.raises(ComplexError):
        homology(c)


def test_hom_group_unit_interval():
    g = hom_group(one_term(), one_term())
    assert g.group == FGAbelianGroup(1)
    coords = g.lookup(identity_map(one_term()))
    assert coords in ((1,), (-1,))


def test_hom_group_from_contractible_is_trivial():
    cn, _, _ = cone(identity_map(two_term(3)))
    g = hom_group(cn, one_term())
    assert g.group.is_trivial()


def test_hom_group_self_of_mod9_sphere():
    c = two_term(9)
    g = hom_group(c, c)
    assert g.group == FGAbelianGroup(0, (9,))
    assert g.lookup(identity_map(c)) != g.lookup(zero_map(c, c))


def test_hom_group_lookup_matches_homotopic_over_z():
    rng = random.Random(5)
    c = two_term(6)
    g = hom_group(c, c)
    for k in range(-4, 5):
        f = cmap(c, c, {0: [[k]], 1: [[k]]})
        same = g.lookup(f) == g.lookup(zero_map(c, c))
        assert same == (homotopic(f, zero_map(c, c)) is not None)


def test_reduce_mod_examples():
    c = two_term(9)
    r = reduce_mod(c, 9)
    assert r.ring == Zmod(9)
    assert r.differential(0).is_zero()
    f = identity_map(c)
    h = homotopic(f, f)
    hr = reduce_mod(h, 4)
    assert isinstance(hr, Homotopy)


def test_reduce_mod_counterexample_data():
    a = 3
    b_cx = cpx({-1: 1, 0: 2}, {-1: [[-a ** 3], [a * a]]})
    r = reduce_mod(b_cx, a * a)
    assert r.differential(-1) == IntMatrix([[0], [0]])


def test_homotopic_agrees_with_brute_force_over_f2():
    rng = random.Random(11)
    ring = Zmod(2)
    trials = 0
    while trials < 40:
        x = random_complex(ring, rng, n_degrees=3, max_rank=2)
        y = random_complex(ring, rng, n_degrees=3, max_rank=2)
        if x.total_rank() + y.total_rank() > 5 or x.total_rank() == 0 or y.total_rank() == 0:
            continue
        trials += 1
        f = random_chain_map(x, y, rng)
        g = random_chain_map(x, y, rng)
        fc = {i: np.array(f.component(i).tolist(), dtype=np.int64) for i in x.degrees() if y.rank(i)}
        gc = {i: np.array(g.component(i).tolist(), dtype=np.int64) for i in x.degrees() if y.rank(i)}
        oracle = any(
            is_homotopy_witness_f2(x, y, fc, gc, h) for h in homotopies_f2(x, y)
        )
        got = homotopic(f, g)
        assert (got is not None) == oracle


def test_random_complex_and_chain_map_are_valid():
    rng = random.Random(42)
    ring = Zmod(3)
    for _ in range(20):
        x = random_complex(ring, rng, n_degrees=4, max_rank=3)
        y = random_complex(ring, rng, n_degrees=4, max_rank=3)
        f = random_chain_map(x, y, rng)  # constructor validates
        assert f.source == x and f.target == y


def test_end_structure_identity_and_associativity():
    rng = random.Random(9)
    ring = Zmod(3)
    c = random_complex(ring, rng, n_degrees=3, max_rank=2)
    table, ident, reps, to_coords = end_structure_mod_p(c)
    n = len(reps)
    if n == 0:
        return
    p = 3

    def mult(xc, yc):
        out = [0] * n
        for i, xi in enumerate(xc):
            if not xi:
                continue
            for j, yj in enumerate(yc):
                if not yj:
                    continue
                for k, ck in enumerate(table[i][j]):
                    out[k] = (out[k] + xi * yj * ck) % p
        return tuple(out)

    basis = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    for i in range(n):
        assert mult(ident, basis[i]) == basis[i]
        assert mult(basis[i], ident) == basis[i]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                assert mult(basis[i], mult(basis[j], basis[k])) == mult(mult(basis[i], basis[j]), basis[k])
