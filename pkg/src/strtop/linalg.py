"""Exact sparse linear algebra: rank / kernel / image / solve over a ground field.

Matrices are stored as coordinate dictionaries.  Elimination uses a fixed
deterministic pivot rule (leftmost column, then lowest row index), so every
derived basis is reproducible byte-for-byte for a fixed basis order.
"""

from __future__ import annotations

from .field import FieldMismatchError, check_same_field


class SparseMatrix:
    """An nrows x ncols matrix over ``field`` with entries in a dict {(i, j): scalar}."""

    __slots__ = ("field", "nrows", "ncols", "entries")

    def __init__(self, field, nrows, ncols, entries=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise IndexError(f"entry ({i},{j}) outside {nrows}x{ncols}")
                if not field.is_zero(v):
                    self.entries[(i, j)] = v

    @classmethod
    def identity(cls, field, n):
        one = field.one()
        return cls(field, n, n, {(i, i): one for i in range(n)})

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, nrows, ncols)

    @classmethod
    def from_rows(cls, field, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                v = field.from_int(v) if isinstance(v, int) else v
                if not field.is_zero(v):
                    entries[(i, j)] = v
        return cls(field, nrows, ncols, entries)

    def get(self, i, j):
        return self.entries.get((i, j), self.field.zero())

    def to_dense(self):
        z = self.field.zero()
        dense = [[z] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            dense[i][j] = v
        return dense

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def __add__(self, other):
        self._check_shape(other)
        F = self.field
        entries = dict(self.entries)
        for key, v in other.entries.items():
            w = F.add(entries.get(key, F.zero()), v)
            if F.is_zero(w):
                entries.pop(key, None)
            else:
                entries[key] = w
        return SparseMatrix(F, self.nrows, self.ncols, entries)

    def __sub__(self, other):
        return self + other.scale(self.field.from_int(-1))

    def scale(self, c):
        F = self.field
        if F.is_zero(c):
            return SparseMatrix(F, self.nrows, self.ncols)
        return SparseMatrix(
            F, self.nrows, self.ncols, {k: F.mul(c, v) for k, v in self.entries.items()}
        )

    def transpose(self):
        return SparseMatrix(
            self.field,
            self.ncols,
            self.nrows,
            {(j, i): v for (i, j), v in self.entries.items()},
        )

    def compose(self, other):
        """Matrix product self @ other."""
        check_same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise ValueError(
                f"dimension mismatch: {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}"
            )
        F = self.field
        rows_self = {}
        for (i, k), v in self.entries.items():
            rows_self.setdefault(k, []).append((i, v))
        entries = {}
        for (k, j), w in other.entries.items():
            for i, v in rows_self.get(k, ()):
                key = (i, j)
                s = F.add(entries.get(key, F.zero()), F.mul(v, w))
                if F.is_zero(s):
                    entries.pop(key, None)
                else:
                    entries[key] = s
        return SparseMatrix(F, self.nrows, other.ncols, entries)

    def apply(self, vec):
        """Apply to a column vector given as {index: scalar}; returns the same shape."""
        F = self.field
        cols = {}
        for (i, j), v in self.entries.items():
            cols.setdefault(j, []).append((i, v))
        out = {}
        for j, c in vec.items():
            if F.is_zero(c):
                continue
            if j >= self.ncols:
                raise IndexError(f"vector index {j} out of range for {self.ncols} columns")
            for i, v in cols.get(j, ()):
                s = F.add(out.get(i, F.zero()), F.mul(v, c))
                if F.is_zero(s):
                    out.pop(i, None)
                else:
                    out[i] = s
        return out

    def _check_shape(self, other):
        check_same_field(self.field, other.field)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def _row_dicts(self):
        rows = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def rref(self):
        """Reduced row echelon form.

        Returns (rows, pivots): ``rows`` is a list of sparse row dicts in
        echelon order, ``pivots`` the pivot column of each returned row.
        Deterministic: columns are processed left to right, candidate rows
        by lowest index.
        """
        F = self.field
        rows = self._row_dicts()
        pivots = []
        pivot_rows = []
        used = [False] * self.nrows
        for col in range(self.ncols):
            pr = None
            for i in range(self.nrows):
                if not used[i] and not F.is_zero(rows[i].get(col, F.zero())):
                    pr = i
                    break
            if pr is None:
                continue
            used[pr] = True
            inv = F.inv(rows[pr][col])
            rows[pr] = {j: F.mul(inv, v) for j, v in rows[pr].items()}
            prow = rows[pr]
            for i in range(self.nrows):
                if i == pr:
                    continue
                c = rows[i].get(col)
                if c is None or F.is_zero(c):
                    continue
                ri = rows[i]
                for j, v in prow.items():
                    w = F.sub(ri.get(j, F.zero()), F.mul(c, v))
                    if F.is_zero(w):
                        ri.pop(j, None)
                    else:
                        ri[j] = w
            pivots.append(col)
            pivot_rows.append(prow)
        return pivot_rows, pivots

    def rank_kernel_image(self):
        """Gaussian elimination summary.

        Returns ``(rank, kernel, image, pivots)`` where ``kernel`` is a list
        of column vectors (dicts) spanning the null space, ``image`` the list
        of pivot columns of the original matrix (as column vector dicts), and
        ``pivots`` the pivot column indices.  rank + len(kernel) == ncols.
        """
        F = self.field
        rows, pivots = self.rref()
        rank = len(pivots)
        pivot_set = set(pivots)
        kernel = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            vec = {free: F.one()}
            for prow, pcol in zip(rows, pivots):
                c = prow.get(free)
                if c is not None and not F.is_zero(c):
                    vec[pcol] = F.neg(c)
            kernel.append(vec)
        cols = {}
        for (i, j), v in self.entries.items():
            cols.setdefault(j, {})[i] = v
        image = [cols.get(j, {}) for j in pivots]
        return rank, kernel, image, pivots

    def rank(self):
        return len(self.rref()[1])

    def solve(self, target):
        """Solve ``self @ x == target`` for a column vector {index: scalar}.

        Returns a solution dict or None when the target is outside the image.
        """
        F = self.field
        for i in target:
            if i >= self.nrows:
                raise IndexError(f"target index {i} out of range for {self.nrows} rows")
        aug = SparseMatrix(F, self.nrows, self.ncols + 1, dict(self.entries))
        for i, v in target.items():
            if not F.is_zero(v):
                aug.entries[(i, self.ncols)] = v
        rows, pivots = aug.rref()
        x = {}
        for prow, pcol in zip(rows, pivots):
            if pcol == self.ncols:
                return None  # pivot in the augmented column: inconsistent
            c = prow.get(self.ncols)
            if c is not None and not F.is_zero(c):
                x[pcol] = c
        return x


def vec_add(field, a, b, coeff=None):
    """a + coeff*b for sparse vectors keyed by anything hashable."""
    if coeff is None:
        coeff = field.one()
    out = dict(a)
    for k, v in b.items():
        w = field.add(out.get(k, field.zero()), field.mul(coeff, v))
        if field.is_zero(w):
            out.pop(k, None)
        else:
            out[k] = w
    return out


def vec_scale(field, a, c):
    if field.is_zero(c):
        return {}
    return {k: field.mul(c, v) for k, v in a.items()}


def span_data(field, vectors, dim):
    """Column span of ``vectors`` (dicts into range(dim)) as a matrix."""
    entries = {}
    for j, vec in enumerate(vectors):
        for i, v in vec.items():
            entries[(i, j)] = v
    return SparseMatrix(field, dim, len(vectors), entries)


def quotient_basis(field, subspace, vectors, dim):
    """Basis of span(vectors) modulo span(subspace), inside F^dim.

    Returns the sublist of ``vectors`` (earliest-first) whose classes form a
    basis of the quotient; deterministic for fixed input order.
    """
    all_vecs = list(subspace) + list(vectors)
    m = span_data(field, all_vecs, dim)
    _, pivots = m.rref()
    # keep input vectors whose column became a pivot
    # (columns processed in order, so subspace columns absorb first)
    nsub = len(subspace)
    chosen = [j - nsub for j in pivots if j >= nsub]
    return [vectors[j] for j in chosen]
