import random
from itertools import combinations, product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from conftest import Q_GIVEN, V_IMPURE, VHAT
from torpure.linalg import (
    Lattice,
    det,
    gcd_maximal_minors,
    hnf,
    identity,
    integer_kernel,
    intersect_all,
    invariant_factors,
    lattice_intersection,
    lattice_membership,
    matmul,
    matvec,
    minors,
    nonnegative_solution,
    rank,
    snf,
    solve_integer,
    transpose,
    vecmat,
)


def random_matrix(rng, rows, cols, lo=-20, hi=20):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def check_snf(M):
    dec = snf(M)
    assert matmul(matmul(dec.U, M), dec.W) == dec.S
    assert abs(det(dec.U)) == 1 and abs(det(dec.W)) == 1
    S = dec.S
    for i, row in enumerate(S):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    d = dec.diagonal
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)
    return d


def check_hnf(M):
    H, U = hnf(M)
    assert matmul(U, M) == H
    assert abs(det(U)) == 1
    last = -1
    for row in H:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            last = len(row)
            continue
        assert last < nz[0], "zero rows last, pivots strictly to the right"
        p = nz[0]
        assert row[p] > 0
        last = p
    pivots = {next(j for j, x in enumerate(r) if x): i for i, r in enumerate(H) if any(r)}
    for j, i in pivots.items():
        for k in range(i):
            assert 0 <= H[k][j] < H[i][j]
    return H


def elementary_invariants(M):
    """Independent oracle: sympy's invariant factors, nonzero ones only."""
    if not M or not M[0]:
        return []
    return [int(x) for x in sympy_invariant_factors(Matrix(M), domain=ZZ) if x != 0]


class TestSnf:
    def test_identity(self):
        dec = snf(identity(2))
        assert dec.S == identity(2)
        assert matmul(matmul(dec.U, identity(2)), dec.W) == identity(2)

    def test_class_group_torsion(self):
        assert snf(V_IMPURE).diagonal == [1, 1, 2]

    def test_random_4x6_against_oracle(self):
        rng = random.Random(46)
        M = random_matrix(rng, 4, 6, -9, 9)
        d = check_snf(M)
        assert [x for x in d if x] == elementary_invariants(M)

    def test_random_contract(self):
        rng = random.Random(2024)
        for _ in range(500):
            r, c = rng.randint(1, 6), rng.randint(1, 8)
            M = random_matrix(rng, r, c)
            if rng.random() < 0.2:
                # force rank deficiency
                M.append([a + b for a, b in zip(M[0], M[-1])])
            d = check_snf(M)
            assert [x for x in d if x] == elementary_invariants(M)

    def test_zero_matrix(self):
        dec = snf([[0, 0], [0, 0]])
        assert dec.diagonal == [0, 0]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r))))
    def test_hypothesis(self, M):
        check_snf(M)

    def test_unimodular_invariance_of_minor_gcd(self):
        rng = random.Random(5)
        for _ in range(30):
            M = random_matrix(rng, 3, 5, -6, 6)
            dec = snf(M)
            for k in range(1, 4):
                g = gcd_maximal_minors(M, k)
                assert gcd_maximal_minors(matmul(dec.U, M), k) == g
                assert gcd_maximal_minors(matmul(M, dec.W), k) == g


class TestHnf:
    def test_identity(self):
        H, U = hnf(identity(3))
        assert H == identity(3) and U == identity(3)

    def test_small_rows(self):
        rows = [[2, 0], [0, 3], [1, 1]]
        H = check_hnf(rows)
        L = Lattice.from_generators(rows)
        assert [1, 1] in L
        box = range(-6, 7)
        span = {(a * 2 + c, b * 3 + c) for a, b, c in product(box, box, box)}
        for x in product(range(-4, 5), repeat=2):
            if x in span:
                assert list(x) in L
        assert Lattice.from_generators([r for r in H if any(r)]) == L

    def test_given_weight_matrix(self):
        check_hnf(Q_GIVEN)

    def test_random_contract(self):
        rng = random.Random(7)
        for _ in range(500):
            M = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 8))
            H = check_hnf(M)
            assert rank(H) == rank(M)


class TestKernel:
    def test_identity(self):
        K = integer_kernel(identity(3))
        assert K.rank == 0 and K.ambient == 3

    def test_vhat_gives_weights(self):
        assert integer_kernel(VHAT) == Lattice.from_generators(Q_GIVEN)

    def test_weights_give_vhat(self):
        assert integer_kernel(Q_GIVEN) == Lattice.from_generators(VHAT)

    def test_zero_map(self):
        assert integer_kernel([[0, 0, 0]]) == Lattice.full(3)

    def test_saturated_random(self):
        rng = random.Random(11)
        for _ in range(100):
            M = random_matrix(rng, rng.randint(1, 4), rng.randint(2, 7), -5, 5)
            K = integer_kernel(M)
            assert K.rank == len(M[0]) - rank(M)
            for b in K.basis:
                assert matvec(M, b) == [0] * len(M)
            if K.rank:
                assert invariant_factors(K.matrix()) == [1] * K.rank


class TestIntersection:
    def test_coordinate(self):
        L1 = Lattice.from_generators([[2, 0], [0, 1]])
        L2 = Lattice.from_generators([[1, 0], [0, 3]])
        assert lattice_intersection(L1, L2) == Lattice.from_generators([[2, 0], [0, 3]])

    def test_column_lattices(self):
        cols = [(1, 3), (2, 3), (3, 5), (1, 4), (2, 4), (4, 5)]
        parts = [Lattice.from_generators([[row[i - 1] for row in Q_GIVEN] for i in I]) for I in cols]
        assert intersect_all(parts) == Lattice.from_generators([[30, 0], [0, 60]])

    def test_ambient_mismatch(self):
        with pytest.raises(ValueError):
            lattice_intersection(Lattice.full(2), Lattice.full(3))

    def test_random_box_oracle(self):
        rng = random.Random(3)
        for _ in range(15):
            while True:
                B1 = random_matrix(rng, 2, 3, -3, 3)
                B2 = random_matrix(rng, 2, 3, -3, 3)
                if rank(B1) == 2 and rank(B2) == 2:
                    break
            L1, L2 = Lattice.from_generators(B1), Lattice.from_generators(B2)
            I = lattice_intersection(L1, L2)
            for x in product(range(-6, 7), repeat=3):
                x = list(x)
                assert (x in I) == (solve_integer(transpose(B1), x) is not None
                                    and solve_integer(transpose(B2), x) is not None)

    def test_algebraic_laws(self):
        rng = random.Random(8)
        for _ in range(20):
            Ls = [Lattice.from_generators(random_matrix(rng, 2, 3, -4, 4), 3) for _ in range(3)]
            a, b, c = Ls
            assert (a & b) == (b & a)
            assert ((a & b) & c) == (a & (b & c))
            assert (a & a) == a


class TestMembership:
    def test_zero(self):
        L = Lattice.from_generators(VHAT)
        assert lattice_membership([0] * 5, L) == [0, 0, 0]

    def test_twisted_row_lattice(self):
        from conftest import V_PURE
        L = Lattice.from_generators(V_PURE)
        assert lattice_membership([40, -60, -6, 0, 0], L) is not None
        # the y = 1 instance of the (1,4),(2,4) difference has odd torsion value
        assert lattice_membership([20, -30, 0, -5, 0], L) is None

    def test_round_trip(self):
        rng = random.Random(9)
        for _ in range(50):
            L = Lattice.from_generators(random_matrix(rng, 3, 4, -5, 5))
            c = [rng.randint(-4, 4) for _ in range(L.rank)]
            x = vecmat(c, L.basis) if L.rank else [0] * 4
            got = lattice_membership(x, L)
            assert got is not None and (vecmat(got, L.basis) if L.rank else [0] * 4) == x


class TestMinors:
    def test_identity(self):
        assert gcd_maximal_minors(identity(3), 3) == 1

    def test_worked_cone(self):
        cols = [[row[i] for i in (0, 1, 2)] for row in VHAT]
        assert gcd_maximal_minors(cols, 3) == 6

    def test_random_against_enumeration(self):
        rng = random.Random(12)
        for _ in range(40):
            M = random_matrix(rng, 3, 5, -7, 7)
            for k in (1, 2, 3):
                g = 0
                for rs in combinations(range(3), k):
                    for cs in combinations(range(5), k):
                        g = gcd(g, det([[M[r][c] for c in cs] for r in rs]))
                assert gcd_maximal_minors(M, k) == g
                assert gcd_maximal_minors(M, k) == gcd(0, *[abs(x) for x in minors(M, k)])


class TestSolve:
    def test_identity(self):
        assert solve_integer(identity(3), [4, -1, 7]) == [4, -1, 7]

    def test_beta(self):
        basis = transpose(VHAT)
        beta = [solve_integer(basis, row) for row in V_IMPURE]
        assert beta == [[1, 0, 0], [0, 1, 0], [0, 0, 2]]

    def test_parity(self):
        assert solve_integer([[2]], [1]) is None

    def test_nonnegative(self):
        assert nonnegative_solution([[1, -1]], [-3]) is not None
        assert nonnegative_solution([[1, 1]], [-3]) is None
