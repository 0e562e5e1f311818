import random
from fractions import Fraction

import pytest

from filtadm import linalg
from filtadm.frobenius import (
    ModificationEdge,
    build_modified_frobenius,
    hom_dim,
    realize_matrices,
)
from filtadm.model import Config, Family, ModuleSpec, Summand, t_n
from filtadm.subobjects import good_span, stable_good_subobjects
from helpers import random_spec

CFG = Config(p=2)
F = Family("F", 1, Fraction(0))


def test_hom_dim_examples():
    assert hom_dim(Summand("F", 0, 1), Summand("F", 0, 2)) == 1
    assert hom_dim(Summand("F", 0, 3), Summand("F", 1, 1)) == 0
    assert hom_dim(Summand("F", 0, 1), Summand("G", 0, 2)) == 0
    # negative alignment never admits a chain map
    assert hom_dim(Summand("F", 2, 2), Summand("F", 0, 4)) == 0


def test_edges_examples(ex1a, ex2, ex3):
    assert build_modified_frobenius(ex1a) == (ModificationEdge(0, 1, 0),)
    assert build_modified_frobenius(ex2) == ()
    assert build_modified_frobenius(ex3) == ()


def test_realize_ex1a_matrices(ex1a):
    real = realize_matrices(ex1a, build_modified_frobenius(ex1a))
    one, zero, two = Fraction(1), Fraction(0), Fraction(2)
    assert real.phi == ((one, zero, zero), (one, one, zero), (zero, zero, two))
    assert real.nmat == ((zero, zero, zero), (zero, zero, one), (zero, zero, zero))


def test_realize_ex2_matrices(ex2):
    real = realize_matrices(ex2, build_modified_frobenius(ex2))
    diag = [real.phi[i][i] for i in range(4)]
    assert diag == [1, 2, 2, 4]
    assert real.nmat[0][1] == 1 and real.nmat[2][3] == 1
    assert sum(1 for row in real.nmat for x in row if x != 0) == 2


def test_realize_single_block():
    spec = ModuleSpec(CFG, (F,), (Summand("F", 0, 1), Summand("F", 0, 1)))
    real = realize_matrices(spec, ())
    assert real.phi == ((1, 0), (0, 1))
    assert all(x == 0 for row in real.nmat for x in row)


def test_realize_rejects_h2():
    spec = ModuleSpec(CFG, (Family("F", 2, Fraction(0)),), (Summand("F", 0, 1),))
    with pytest.raises(ValueError, match="h=1"):
        realize_matrices(spec, ())


def test_phi_invertible_n_nilpotent():
    rng = random.Random(6)
    done = 0
    while done < 20:
        spec = random_spec(rng)
        if spec is None:
            continue
        real = realize_matrices(spec, build_modified_frobenius(spec))
        assert linalg.det(real.phi) != 0
        n = spec.dimension
        assert linalg.mat_pow(real.nmat, n) == linalg.zeros(n, n)
        done += 1


def test_commutation_and_det_valuation_random():
    rng = random.Random(12)
    done = 0
    while done < 60:
        spec = random_spec(rng)
        if spec is None:
            continue
        edges = build_modified_frobenius(spec)
        real = realize_matrices(spec, edges)
        p = Fraction(spec.config.p)
        lhs = linalg.mat_mul(real.nmat, real.phi)
        rhs = linalg.mat_scale(p, linalg.mat_mul(real.phi, real.nmat))
        assert lhs == rhs
        want = sum(
            linalg.p_valuation(real.seeds[blk.family.id], spec.config.p) + blk.twist
            for blk in real.basis
        )
        assert linalg.p_valuation(linalg.det(real.phi), spec.config.p) == want
        done += 1


def test_det_valuation_custom_seeds(ex1a):
    seeds = {"F": Fraction(12)}   # val_2 = 2
    real = realize_matrices(ex1a, build_modified_frobenius(ex1a), seeds=seeds)
    assert linalg.p_valuation(linalg.det(real.phi), 2) == 3 * 2 + (0 + 0 + 1)


def test_char_poly_independent_of_edges(ex1a):
    rng = random.Random(3)
    done = 0
    while done < 30:
        spec = random_spec(rng, max_dim=5)
        if spec is None:
            continue
        edges = build_modified_frobenius(spec)
        with_edges = realize_matrices(spec, edges)
        without = realize_matrices(spec, ())
        assert linalg.char_poly(with_edges.phi) == linalg.char_poly(without.phi)
        done += 1


def test_t_n_concrete_matches_combinatorial():
    rng = random.Random(21)
    done = 0
    while done < 40:
        spec = random_spec(rng)
        if spec is None:
            continue
        edges = build_modified_frobenius(spec)
        real = realize_matrices(spec, edges)
        for good in stable_good_subobjects(spec, edges):
            rows = good_span(spec, good)
            assert real.t_n_concrete(rows) == t_n(spec, good)
        done += 1


def test_t_n_concrete_det_oracle(ex1a):
    # with default prime seeds, t_N equals the p-adic valuation of the
    # restricted determinant plus the family base contributions
    from filtadm.ordering import canonical_order

    spec = ModuleSpec(
        Config(p=2),
        (Family("F", 1, Fraction(1, 2)), Family("G", 1, Fraction(-1))),
        (Summand("F", 0, 2), Summand("G", 1, 1)),
    )
    spec = canonical_order(spec)[0]
    edges = build_modified_frobenius(spec)
    real = realize_matrices(spec, edges)
    for good in stable_good_subobjects(spec, edges):
        rows = linalg.rref(good_span(spec, good))
        if not rows:
            continue
        restr = real.restriction(rows)
        det = linalg.det(restr)
        val_p = linalg.p_valuation(det, 2)
        counts = {}
        for fam in spec.families:
            q = int(real.seeds[fam.id])
            counts[fam.id] = linalg.p_valuation(det, q) if q != 1 else None
        expected = Fraction(val_p) * spec.config.deg_K_Qp
        for fam in spec.families:
            c = counts[fam.id]
            assert c is not None
            expected += c * fam.t_base
        assert real.t_n_concrete(rows) == expected
