"""Graded vector spaces, homogeneous linear maps, duals and bidual embeddings.

Degrees are signed integers (upper/cohomological convention).  The graded
dual places functionals on V^n in degree -n.  The dual of a map of degree r
is again of degree r and carries the Koszul sign

    f_dual(phi) = (-1)^{|phi| |f|} phi . f

so that (g . f)_dual = (-1)^{|f||g|} f_dual . g_dual.
"""

from __future__ import annotations

from .field import check_same_field
from .linalg import SparseMatrix


class GradedVectorSpace:
    """Finite ordered bases of named labels, indexed by integer degree."""

    __slots__ = ("field", "basis", "_where")

    def __init__(self, field, basis):
        self.field = field
        self.basis = {n: tuple(labels) for n, labels in sorted(basis.items()) if labels}
        self._where = {}
        for n, labels in self.basis.items():
            for i, lbl in enumerate(labels):
                if lbl in self._where:
                    raise ValueError(f"duplicate basis label {lbl!r}")
                self._where[lbl] = (n, i)

    def degrees(self):
        return sorted(self.basis)

    def dim(self, n):
        return len(self.basis.get(n, ()))

    def total_dim(self):
        return sum(len(v) for v in self.basis.values())

    def labels(self, n):
        return self.basis.get(n, ())

    def all_labels(self):
        for n in self.degrees():
            yield from self.basis[n]

    def degree_of(self, label):
        return self._where[label][0]

    def index_of(self, label):
        return self._where[label][1]

    def __contains__(self, label):
        return label in self._where

    def __eq__(self, other):
        return (
            isinstance(other, GradedVectorSpace)
            and self.field == other.field
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field, tuple(self.basis.items())))

    def dual(self):
        """Graded dual: functionals on degree n live in degree -n, labels get a '^'."""
        return GradedVectorSpace(
            self.field,
            {-n: tuple(f"{lbl}^" for lbl in labels) for n, labels in self.basis.items()},
        )

    def tensor(self, other):
        check_same_field(self.field, other.field)
        basis = {}
        for n, la in self.basis.items():
            for m, lb in other.basis.items():
                basis.setdefault(n + m, []).extend(f"{a}{TENSOR_SEP}{b}" for a in la for b in lb)
        return GradedVectorSpace(self.field, basis)

    def degree_of_vector(self, vec):
        """Degree of a homogeneous vector; None for the zero vector."""
        degs = {self.degree_of(lbl) for lbl, c in vec.items() if not self.field.is_zero(c)}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous vector with degrees {sorted(degs)}")
        return degs.pop()


TENSOR_SEP = "⊗"  # the tensor glyph, used in composite basis labels


def vadd(field, acc, label, coeff):
    """In-place acc += coeff * e_label for label-keyed sparse vectors."""
    if field.is_zero(coeff):
        return
    s = field.add(acc.get(label, field.zero()), coeff)
    if field.is_zero(s):
        acc.pop(label, None)
    else:
        acc[label] = s


def vcomb(field, acc, vec, coeff):
    for lbl, c in vec.items():
        vadd(field, acc, lbl, field.mul(coeff, c))


class GradedMap:
    """Homogeneous linear map of a fixed degree between graded vector spaces.

    Blocks are per source degree n: a matrix from basis(n) to basis(n + degree).
    Missing blocks are zero.
    """

    __slots__ = ("source", "target", "degree", "blocks")

    def __init__(self, source, target, degree, blocks=None):
        check_same_field(source.field, target.field)
        self.source = source
        self.target = target
        self.degree = degree
        self.blocks = {}
        if blocks:
            for n, m in blocks.items():
                if m.nrows != target.dim(n + degree) or m.ncols != source.dim(n):
                    raise ValueError(
                        f"block at degree {n} has shape {m.nrows}x{m.ncols}, "
                        f"expected {target.dim(n + degree)}x{source.dim(n)}"
                    )
                if not m.is_zero():
                    self.blocks[n] = m

    @classmethod
    def identity(cls, space):
        return cls(
            space,
            space,
            0,
            {n: SparseMatrix.identity(space.field, space.dim(n)) for n in space.degrees()},
        )

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree)

    @classmethod
    def from_function(cls, source, target, degree, fn):
        """Build from ``fn(label) -> {target_label: scalar}`` on basis labels."""
        F = source.field
        blocks = {}
        for n in source.degrees():
            entries = {}
            src_labels = source.labels(n)
            for j, lbl in enumerate(src_labels):
                img = fn(lbl)
                for tlbl, c in img.items():
                    if F.is_zero(c):
                        continue
                    if target.degree_of(tlbl) != n + degree:
                        raise ValueError(
                            f"{lbl!r} (deg {n}) mapped into {tlbl!r} "
                            f"(deg {target.degree_of(tlbl)}), expected degree {n + degree}"
                        )
                    entries[(target.index_of(tlbl), j)] = c
            blocks[n] = SparseMatrix(
                F, target.dim(n + degree), len(src_labels), entries
            )
        return cls(source, target, degree, blocks)

    def block(self, n):
        b = self.blocks.get(n)
        if b is None:
            return SparseMatrix.zero(
                self.source.field, self.target.dim(n + self.degree), self.source.dim(n)
            )
        return b

    def __call__(self, vec):
        """Apply to a label-keyed vector; works degreewise."""
        F = self.source.field
        out = {}
        by_deg = {}
        for lbl, c in vec.items():
            by_deg.setdefault(self.source.degree_of(lbl), {})[
                self.source.index_of(lbl)
            ] = c
        for n, col in by_deg.items():
            img = self.block(n).apply(col)
            tlabels = self.target.labels(n + self.degree)
            for i, c in img.items():
                vadd(F, out, tlabels[i], c)
        return out

    def compose(self, other):
        """self . other (apply ``other`` first); degrees add."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        blocks = {}
        for n in other.source.degrees():
            blocks[n] = self.block(n + other.degree).compose(other.block(n))
        return GradedMap(other.source, self.target, self.degree + other.degree, blocks)

    def __add__(self, other):
        if (
            other.source != self.source
            or other.target != self.target
            or other.degree != self.degree
        ):
            raise ValueError("sum of incompatible maps")
        return GradedMap(
            self.source,
            self.target,
            self.degree,
            {n: self.block(n) + other.block(n) for n in self.source.degrees()},
        )

    def scale(self, c):
        return GradedMap(
            self.source,
            self.target,
            self.degree,
            {n: b.scale(c) for n, b in self.blocks.items()},
        )

    def __sub__(self, other):
        return self + other.scale(self.source.field.from_int(-1))

    def is_zero(self):
        return all(b.is_zero() for b in self.blocks.values())

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and all(self.block(n) == other.block(n) for n in self.source.degrees())
        )

    def dual(self):
        """Koszul-signed dual map between the graded duals (same degree)."""
        F = self.source.field
        src_d = self.target.dual()
        tgt_d = self.source.dual()
        r = self.degree
        blocks = {}
        for n, b in self.blocks.items():
            # functionals on target^{n+r} (degree -(n+r)) -> functionals on source^n
            m = b.transpose()
            if (n + r) * r % 2:
                m = m.scale(F.from_int(-1))
            blocks[-(n + r)] = m
        return GradedMap(src_d, tgt_d, r, blocks)


def graded_dual(f: GradedMap) -> GradedMap:
    return f.dual()


def psi_embedding(space: GradedVectorSpace) -> GradedMap:
    """Canonical bidual embedding psi(v)(phi) = (-1)^{|v||phi|} phi(v).

    On the degree-n block this is (-1)^n times the canonical matrix.
    """
    F = space.field
    bidual = space.dual().dual()
    blocks = {}
    for n in space.degrees():
        d = space.dim(n)
        m = SparseMatrix.identity(F, d)
        if n % 2:
            m = m.scale(F.from_int(-1))
        blocks[n] = m
    return GradedMap(space, bidual, 0, blocks)


def tensor_map(f: GradedMap, g: GradedMap) -> GradedMap:
    """f (x) g with the Koszul rule (f(x)g)(x(x)y) = (-1)^{|g||x|} f(x)(x)g(y)."""
    F = f.source.field
    src = f.source.tensor(g.source)
    tgt = f.target.tensor(g.target)
    # built from blocks rather than by label splitting: iterated tensor labels
    # contain separators of their own
    entries_by_deg = {}
    for na in f.source.degrees():
        for nb in g.source.degrees():
            n = na + nb
            sign = -1 if (g.degree % 2) and (na % 2) else 1
            fa = f.block(na)
            gb = g.block(nb)
            if fa.is_zero() or gb.is_zero():
                continue
            src_labels = src.labels(n)
            tgt_labels = tgt.labels(n + f.degree + g.degree)
            # positions of a-part/b-part labels inside the tensor bases
            fa_src = f.source.labels(na)
            gb_src = g.source.labels(nb)
            fa_tgt = f.target.labels(na + f.degree)
            gb_tgt = g.target.labels(nb + g.degree)
            src_pos = {lbl: k for k, lbl in enumerate(src_labels)}
            tgt_pos = {lbl: k for k, lbl in enumerate(tgt_labels)}
            dest = entries_by_deg.setdefault(n, {})
            for (ia, ja), va in fa.entries.items():
                for (ib, jb), vb in gb.entries.items():
                    sj = src_pos[f"{fa_src[ja]}{TENSOR_SEP}{gb_src[jb]}"]
                    ti = tgt_pos[f"{fa_tgt[ia]}{TENSOR_SEP}{gb_tgt[ib]}"]
                    v = F.mul(va, vb)
                    if sign < 0:
                        v = F.neg(v)
                    dest[(ti, sj)] = F.add(dest.get((ti, sj), F.zero()), v)
    blocks = {
        n: SparseMatrix(
            F, tgt.dim(n + f.degree + g.degree), src.dim(n), entries
        )
        for n, entries in entries_by_deg.items()
    }
    return GradedMap(src, tgt, f.degree + g.degree, blocks)
