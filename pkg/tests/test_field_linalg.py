import random

from fractions import Fraction

import pytest

from strtop.field import QQ, FieldMismatchError, PrimeField, check_same_field, field_from_spec
from strtop.linalg import SparseMatrix, quotient_basis


def test_rational_ops():
    assert QQ.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert QQ.inv(Fraction(-3, 7)) == Fraction(-7, 3)
    assert QQ.parse("3/4") == Fraction(3, 4)
    assert QQ.parse("-5") == Fraction(-5)


def test_prime_field_ops():
    F = PrimeField(7)
    assert F.add(5, 4) == 2
    assert F.mul(3, 5) == 1
    assert F.inv(3) == 5
    assert F.parse("3/5") == F.mul(3, F.inv(5))
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        PrimeField(2**31 + 11)


def test_field_spec_roundtrip():
    assert field_from_spec("Q") == QQ
    assert field_from_spec("Fp:5") == PrimeField(5)
    with pytest.raises(FieldMismatchError):
        check_same_field(QQ, PrimeField(5))


def test_rank_empty_and_identity():
    m = SparseMatrix(QQ, 0, 0)
    rank, kernel, image, pivots = m.rank_kernel_image()
    assert rank == 0 and kernel == [] and image == [] and pivots == []
    m = SparseMatrix.identity(QQ, 3)
    rank, kernel, image, pivots = m.rank_kernel_image()
    assert rank == 3 and kernel == []


def test_solve_identity_and_inconsistent():
    m = SparseMatrix.identity(QQ, 4)
    t = {0: Fraction(2), 3: Fraction(-1)}
    assert m.solve(t) == t
    z = SparseMatrix(QQ, 1, 2)
    assert z.solve({0: Fraction(1)}) is None
    assert z.solve({}) == {}


def test_kernel_annihilates():
    rng = random.Random(7)
    for _ in range(20):
        nr, nc = rng.randint(1, 6), rng.randint(1, 6)
        entries = {
            (i, j): Fraction(rng.randint(-4, 4))
            for i in range(nr)
            for j in range(nc)
            if rng.random() < 0.5
        }
        m = SparseMatrix(QQ, nr, nc, entries)
        rank, kernel, image, pivots = m.rank_kernel_image()
        assert rank + len(kernel) == nc
        for v in kernel:
            assert m.apply(v) == {}
        # rank equals rank of a dense elimination with shuffled order
        assert rank == dense_rank_shuffled(m, rng)


def dense_rank_shuffled(m, rng):
    # independent oracle: dense Gaussian elimination over Q in a random
    # row/column order
    rows = [[Fraction(0)] * m.ncols for _ in range(m.nrows)]
    for (i, j), v in m.entries.items():
        rows[i][j] = v
    row_order = list(range(m.nrows))
    col_order = list(range(m.ncols))
    rng.shuffle(row_order)
    rng.shuffle(col_order)
    rows = [[rows[i][j] for j in col_order] for i in row_order]
    rank = 0
    for col in range(m.ncols):
        piv = None
        for r in range(rank, m.nrows):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(m.nrows):
            if r != rank and rows[r][col] != 0:
                c = rows[r][col]
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def test_rank_mod_p_matches_q_for_unimodular():
    F = PrimeField(5)
    m = SparseMatrix.from_rows(F, [[1, 2], [3, 4]])
    assert m.rank() == 2
    m2 = SparseMatrix.from_rows(F, [[1, 2], [2, 4]])
    assert m2.rank() == 1


def test_quotient_basis():
    sub = [{0: Fraction(1)}]
    vecs = [{0: Fraction(2)}, {1: Fraction(1)}, {0: Fraction(1), 1: Fraction(1)}]
    q = quotient_basis(QQ, sub, vecs, 2)
    assert q == [{1: Fraction(1)}]


def test_compose_apply_consistency():
    a = SparseMatrix.from_rows(QQ, [[1, 2], [0, 1]])
    b = SparseMatrix.from_rows(QQ, [[1, 1], [1, 0]])
    ab = a.compose(b)
    v = {0: Fraction(1), 1: Fraction(3)}
    assert ab.apply(v) == a.apply(b.apply(v))
