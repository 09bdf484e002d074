"""Bigraded homology tables over bar complexes: differential Tor and Ext,
functoriality, the external shuffle product, Ext/Tor duality, and Gorenstein
certification.

A ``BigradedTable`` records, per bidegree, the dimension, a deterministic
basis of homology representatives in chain coordinates, and whether the
entry is certified exact within the computation window.  Windowed
(truncated) algebras can only certify entries whose internal degree the
truncation provably does not touch; everything else is reported uncertified,
never silently wrong.
"""

from __future__ import annotations

from .algebra import GradedModule, trivial_bimodule, restrict_side, algebra_as_bimodule
from .bar import BarComplex, Window, enumerate_words, word_internal, induced_chain_map
from .field import check_same_field
from .graded import vadd
from .linalg import SparseMatrix, quotient_basis, span_data


class HomologyCell:
    __slots__ = ("dim", "reps", "certified", "chain_dim", "_solver", "_n_image")

    def __init__(self, field, chain_dim, image, kernel, certified):
        self.chain_dim = chain_dim
        self.certified = certified
        self.reps = quotient_basis(field, image, kernel, chain_dim)
        self.dim = len(self.reps)
        self._n_image = len(image)
        self._solver = span_data(field, list(image) + self.reps, chain_dim)

    def express(self, vec):
        """Homology coordinates of a cycle (chain-coordinate dict)."""
        sol = self._solver.solve(vec)
        if sol is None:
            raise ValueError("vector is not a cycle modulo boundaries")
        out = {}
        for j, c in sol.items():
            if j >= self._n_image:
                out[j - self._n_image] = c
        return out


class BigradedTable:
    """Computed page: per-bidegree homology with provenance.

    ``kind`` is "tor" (differential lowers p; q = internal degree) or "ext"
    (differential raises p; second index is the internal degree shift t).
    """

    def __init__(self, label, kind, complex_obj, cells, window, provenance=""):
        self.label = label
        self.kind = kind
        self.complex = complex_obj
        self.cells = cells
        self.window = window
        self.provenance = provenance
        self.field = complex_obj.field

    def bidegrees(self):
        return sorted(self.cells)

    def cell(self, p, q):
        return self.cells.get((p, q))

    def dim(self, p, q):
        c = self.cells.get((p, q))
        return c.dim if c else 0

    def certified(self, p, q):
        c = self.cells.get((p, q))
        return bool(c and c.certified)

    def nonzero(self, certified_only=True):
        out = []
        for key in self.bidegrees():
            c = self.cells[key]
            if c.dim and (c.certified or not certified_only):
                out.append((key, c.dim))
        return out

    def total_dims(self, certified_only=True):
        """Dimensions by total degree (p + q for ext pages, q - p for tor)."""
        out = {}
        for (p, q), c in self.cells.items():
            if certified_only and not c.certified:
                continue
            n = (p + q) if self.kind == "ext" else (q - p)
            out[n] = out.get(n, 0) + c.dim
        return {n: d for n, d in sorted(out.items()) if d}

    def dims_dict(self, certified_only=True):
        return {
            key: c.dim
            for key, c in sorted(self.cells.items())
            if c.dim and (c.certified or not certified_only)
        }


def homology_tor_table(bar: BarComplex, label, provenance=""):
    F = bar.field
    cells = {}
    for (p, q) in bar.bidegrees():
        d_out = bar.differential(p, q)
        _, kernel, _, _ = d_out.rank_kernel_image()
        d_in = bar.differential(p + 1, q)
        _, _, image, _ = d_in.rank_kernel_image()
        cells[(p, q)] = HomologyCell(
            F, bar.dim(p, q), image, kernel, bar.certified(p, q)
        )
    return BigradedTable(label, "tor", bar, cells, bar.window, provenance)


# ---------------------------------------------------------------------------
# generic Ext via Hom off the bar resolution of the first module


class CochainComplex:
    """Hom_A(B(A, A, K), L) as Hom(Abar^p (x) K, L), bigraded by (p, t).

    K and L are left A-modules; t is the internal degree shift of a cochain
    (a basis cochain ((w, k), l) has t = |l| - |w| - |k| and total degree
    p + t).  The differential raises p by one:

        (d phi)(w' (x) k') = -(-1)^{|phi|} phi~(d_bar(1 [w'] k'))

    with phi~ the left-linear extension phi~(a [w] k) =
    (-1)^{|phi||a|} a . phi(w (x) k).
    """

    def __init__(self, A, K: GradedModule, L: GradedModule, window: Window):
        check_same_field(A.field, K.field, L.field)
        self.A = A
        self.K = K
        self.L = L
        self.window = window
        self.field = A.field
        self._pairs = {}  # p -> list of (word, k)
        self._basis = {}  # (p, t) -> list of (word, k, l)
        self._index = {}
        self._diff = {}
        self._build()

    def _build(self):
        A, K, L = self.A, self.K, self.L
        ldegs = [(l, L.deg(l)) for n in L.space.degrees() for l in L.space.labels(n)]
        for p in range(self.window.max_p + 1):
            pairs = []
            for w in enumerate_words(A, p, self.window.max_q):
                wd = word_internal(A, w)
                for n in K.space.degrees():
                    for k in K.space.labels(n):
                        pairs.append((w, k, wd + n))
            self._pairs[p] = pairs
            for (w, k, src_deg) in pairs:
                for l, ld in ldegs:
                    t = ld - src_deg
                    self._basis.setdefault((p, t), []).append((w, k, l))
        for key, cell in self._basis.items():
            cell.sort()
            self._index[key] = {elt: i for i, elt in enumerate(cell)}

    def basis(self, p, t):
        return self._basis.get((p, t), [])

    def dim(self, p, t):
        return len(self._basis.get((p, t), ()))

    def bidegrees(self):
        return sorted(self._basis)

    def _resolution_diff(self, word, k):
        """d_bar of 1 [word] k in B(A, A, K): {(head, word', k'): scalar}."""
        A, K, F = self.A, self.K, self.field
        out = {}
        p = len(word)
        prefix = 0
        for i in range(1, p + 1):
            prefix = (prefix + (A.deg(word[i - 1]) + 1)) % 2
            if i == 1 and True:
                pass
            if i < p:
                prod = A.basis_product(word[i - 1], word[i])
                for m, c in prod.items():
                    if A.deg(m) == 0:
                        continue
                    key = (A.space.labels(0)[0] if False else None,)
                    kk = (None, word[: i - 1] + (m,) + word[i + 1 :], k)
                    vadd(F, out, kk, c if prefix == 0 else F.neg(c))
            else:
                img = K.act_left({word[p - 1]: F.one()}, {k: F.one()})
                for k2, c in img.items():
                    kk = (None, word[: p - 1], k2)
                    vadd(F, out, kk, c if prefix == 0 else F.neg(c))
        # gap 0: head 1 merges with the first letter, sign (+1)^{|1|} = +1
        if p:
            kk = (word[0], word[1:], k)
            vadd(F, out, kk, F.one())
        return out

    def differential(self, p, t):
        """Matrix of d: C^{p,t} -> C^{p+1,t}."""
        key = (p, t)
        if key in self._diff:
            return self._diff[key]
        F, A, L = self.field, self.A, self.L
        src_index = self._index.get((p, t), {})
        tgt = self.basis(p + 1, t)
        phi_par = (p + t) % 2
        glob = -1 if phi_par == 0 else 1  # -(-1)^{|phi|}
        entries = {}
        for (w1, k1, l_unused) in ():
            pass
        for i_tgt, (w1, k1, l1) in enumerate(tgt):
            for (head, w2, k2), c in self._resolution_diff(w1, k1).items():
                if head is None:
                    j = src_index.get((w2, k2, l1))
                    if j is None:
                        continue
                    v = c if glob > 0 else F.neg(c)
                    entries[(i_tgt, j)] = F.add(
                        entries.get((i_tgt, j), F.zero()), v
                    )
                else:
                    # phi~(head [w2] k2) = (-1)^{|phi||head|} head . phi(w2 (x) k2)
                    sgn = (phi_par * A.deg(head)) % 2
                    for l_src in L.space.all_labels():
                        j = src_index.get((w2, k2, l_src))
                        if j is None:
                            continue
                        acted = L.act_left({head: F.one()}, {l_src: F.one()})
                        cl = acted.get(l1)
                        if cl is None or F.is_zero(cl):
                            continue
                        v = F.mul(c, cl)
                        if (sgn + (0 if glob > 0 else 1)) % 2:
                            v = F.neg(v)
                        entries[(i_tgt, j)] = F.add(
                            entries.get((i_tgt, j), F.zero()), v
                        )
        m = SparseMatrix(F, len(tgt), self.dim(p, t), entries)
        self._diff[key] = m
        return m

    def trust_degree(self):
        cands = [
            t
            for t in (
                self.A.trust_degree(),
                self.K.trust_degree(),
                self.L.trust_degree(),
            )
            if t is not None
        ]
        return min(cands) if cands else None

    def certified(self, p, t):
        if p + 1 > self.window.max_p:
            return False
        top_l = max(self.L.space.degrees(), default=0)
        min_k = min(self.K.space.degrees(), default=0)
        need = top_l - min_k - t
        if need > self.window.max_q:
            return False
        tr = self.trust_degree()
        return tr is None or need <= tr


def homology_ext_table(cx: CochainComplex, label, provenance=""):
    F = cx.field
    cells = {}
    for (p, t) in cx.bidegrees():
        d_out = cx.differential(p, t)
        _, kernel, _, _ = d_out.rank_kernel_image()
        if p == 0:
            image = []
        else:
            _, _, image, _ = cx.differential(p - 1, t).rank_kernel_image()
        cells[(p, t)] = HomologyCell(
            F, cx.dim(p, t), image, kernel, cx.certified(p, t)
        )
    return BigradedTable(label, "ext", cx, cells, cx.window, provenance)


# ---------------------------------------------------------------------------
# public operations


def tor(A, K, L, window, label="Tor", provenance=""):
    """Differential Tor of a right module K and left module L over A."""
    KR = restrict_side(K, "right") if K.side == "bi" else K
    LL = restrict_side(L, "left") if L.side == "bi" else L
    bar = BarComplex(A, KR, LL, window)
    return homology_tor_table(bar, label, provenance)


def ext(A, K, L, window, label="Ext", provenance=""):
    """Ext_A(K, L) for left modules K, L via Hom off the bar resolution of K."""
    KL = restrict_side(K, "left") if K.side == "bi" else K
    LL = restrict_side(L, "left") if L.side == "bi" else L
    cx = CochainComplex(A, KL, LL, window)
    return homology_ext_table(cx, label, provenance)


class TableMap:
    """Map of BigradedTables: per-bidegree matrices in homology coordinates."""

    def __init__(self, source, target, dp, dq, blocks):
        self.source = source
        self.target = target
        self.dp = dp
        self.dq = dq
        self.blocks = blocks

    def block(self, p, q):
        b = self.blocks.get((p, q))
        if b is None:
            sdim = self.source.dim(p, q)
            tdim = self.target.dim(p + self.dp, q + self.dq)
            return SparseMatrix.zero(self.source.field, tdim, sdim)
        return b

    def compose(self, other):
        if other.target is not self.source and other.target != self.source:
            raise ValueError("table map composition mismatch")
        blocks = {}
        for (p, q) in other.source.bidegrees():
            mid = (p + other.dp, q + other.dq)
            blocks[(p, q)] = self.block(*mid).compose(other.block(p, q))
        return TableMap(
            other.source, self.target, self.dp + other.dp, self.dq + other.dq, blocks
        )

    def is_zero_on_certified(self):
        for (p, q) in self.source.bidegrees():
            if not self.source.certified(p, q):
                continue
            if not self.block(p, q).is_zero():
                return False
        return True

    def scale(self, c):
        return TableMap(
            self.source,
            self.target,
            self.dp,
            self.dq,
            {k: b.scale(c) for k, b in self.blocks.items()},
        )


def table_map_from_chain_blocks(src_table, dst_table, chain_blocks, dq=0):
    """Push a chain-level map (per-источник-bidegree matrices) to homology."""
    F = src_table.field
    blocks = {}
    for (p, q), cell in src_table.cells.items():
        if cell.dim == 0:
            continue
        tgt_cell = dst_table.cell(p, q + dq)
        mat = chain_blocks.get((p, q))
        entries = {}
        for j, rep in enumerate(cell.reps):
            img = mat.apply(rep) if mat is not None else {}
            if tgt_cell is None:
                if img:
                    raise ValueError(f"image escapes the target table at {(p, q + dq)}")
                continue
            for i, c in tgt_cell.express(img).items():
                entries[(i, j)] = c
        if tgt_cell is not None:
            blocks[(p, q)] = SparseMatrix(F, tgt_cell.dim, cell.dim, entries)
    return TableMap(src_table, dst_table, 0, dq, blocks)


def tor_induced(src_table, dst_table, phi, f, g, fdeg=0, gdeg=0):
    """Functoriality of Tor: the map induced by (phi, f, g).

    phi: label -> vector algebra map A -> A'; f right-module map K -> K' over
    phi (degree fdeg); g left-module map L -> L' over phi (degree gdeg, with
    the convention g(a l) = (-1)^{gdeg |a|} phi(a) g(l)).  Equivariance is
    spot-checked on basis elements; non-equivariant inputs are rejected.
    """
    src_bar = src_table.complex
    dst_bar = dst_table.complex
    _check_equivariance(src_bar, dst_bar, phi, f, g, fdeg, gdeg)
    chain_blocks = induced_chain_map(src_bar, dst_bar, phi, f, g, fdeg, gdeg)
    return table_map_from_chain_blocks(src_table, dst_table, chain_blocks, dq=fdeg + gdeg)


def _check_equivariance(src_bar, dst_bar, phi, f, g, fdeg, gdeg):
    F = src_bar.field
    A, K, L = src_bar.A, src_bar.K, src_bar.L
    K2, L2 = dst_bar.K, dst_bar.L
    for a in list(A.positive_labels())[:8]:
        pa = phi(a)
        for k in list(K.space.all_labels())[:6]:
            lhs = {}
            for k2, c in K.act_right({k: F.one()}, {a: F.one()}).items():
                for k3, c2 in f(k2).items():
                    vadd(F, lhs, k3, F.mul(c, c2))
            rhs = {}
            for k2, c in f(k).items():
                for k3, c2 in K2.act_right({k2: c}, pa).items():
                    vadd(F, rhs, k3, c2)
            if lhs != rhs:
                raise ValueError(f"first-slot map not equivariant on ({k}, {a})")
        for l in list(L.space.all_labels())[:6]:
            lhs = {}
            for l2, c in L.act_left({a: F.one()}, {l: F.one()}).items():
                for l3, c2 in g(l2).items():
                    vadd(F, lhs, l3, F.mul(c, c2))
            rhs = {}
            for l2, c in g(l).items():
                for l3, c2 in L2.act_left(pa, {l2: c}).items():
                    vadd(F, rhs, l3, c2)
            if (gdeg * A.deg(a)) % 2:
                rhs = {k2: F.neg(v) for k2, v in rhs.items()}
            if lhs != rhs:
                raise ValueError(f"second-slot map not equivariant on ({a}, {l})")


def invert_iso(tm: TableMap):
    """Exact per-bidegree inverse; raises with the offending bidegree."""
    F = tm.source.field
    blocks = {}
    for (p, q) in tm.source.bidegrees():
        sdim = tm.source.dim(p, q)
        tdim = tm.target.dim(p + tm.dp, q + tm.dq)
        if sdim == 0 and tdim == 0:
            continue
        m = tm.block(p, q)
        if sdim != tdim:
            raise ValueError(f"not invertible at bidegree {(p, q)}: {tdim}x{sdim}")
        inv_cols = {}
        for i in range(tdim):
            col = m.solve({i: F.one()})
            if col is None:
                raise ValueError(f"not invertible at bidegree {(p, q)}")
            for k2, v in col.items():
                inv_cols[(k2, i)] = v
        blocks[(p + tm.dp, q + tm.dq)] = SparseMatrix(F, sdim, tdim, inv_cols)
    return TableMap(tm.target, tm.source, -tm.dp, -tm.dq, blocks)


def tor_external_product(t1, t2, dst_table, k_join, l_join):
    """The external shuffle product into Tor over the tensor algebra.

    Returns blocks keyed by ((p1,q1),(p2,q2)): a matrix from hom(t1 cell)
    (x) hom(t2 cell) (columns ordered i1 * dim2 + i2; Koszul sign of the
    class tensor built in at chain level by the shuffle) to the homology of
    dst_table at (p1+p2, q1+q2).
    """
    from .bar import shuffle_chain_map

    F = dst_table.field
    sh = shuffle_chain_map(t1.complex, t2.complex, dst_table.complex, k_join, l_join)
    out = {}
    for (key1, cell1) in t1.cells.items():
        if cell1.dim == 0:
            continue
        for (key2, cell2) in t2.cells.items():
            if cell2.dim == 0:
                continue
            p, q = key1[0] + key2[0], key1[1] + key2[1]
            tgt = dst_table.cell(p, q)
            if tgt is None:
                continue
            mat = sh[(key1, key2)]
            dim2_chain = t2.complex.dim(*key2)
            entries = {}
            for i1, r1 in enumerate(cell1.reps):
                for i2, r2 in enumerate(cell2.reps):
                    # chain-level tensor: product basis index j1 * dim + j2
                    vec = {}
                    for j1, c1 in r1.items():
                        for j2, c2 in r2.items():
                            vec[j1 * dim2_chain + j2] = F.mul(c1, c2)
                    img = mat.apply(vec)
                    for i, c in tgt.express(img).items():
                        entries[(i, i1 * cell2.dim + i2)] = c
            out[(key1, key2)] = SparseMatrix(
                F, tgt.dim, cell1.dim * cell2.dim, entries
            )
    return out


# ---------------------------------------------------------------------------
# Ext/Tor duality


def dual_left_of_right(M: GradedModule):
    """Left module structure on the dual of a right module:
    (a . phi)(m) = (-1)^{|a|(|phi|+|m|)} phi(m a)."""
    A = M.algebra
    F = M.field
    dual_space = M.space.dual()
    left = {}
    for a in A.positive_labels():
        da = A.deg(a)
        for phi_src in M.space.all_labels():
            out = {}
            for m in M.space.all_labels():
                ma = M.act_right_basis(m, a)
                c = ma.get(phi_src)
                if c is None or F.is_zero(c):
                    continue
                sgn = (da * ((M.deg(phi_src) + M.deg(m)) % 2)) % 2
                vadd(F, out, f"{m}^", c if sgn == 0 else F.neg(c))
            if out:
                left[(a, f"{phi_src}^")] = out
    return GradedModule(A, dual_space, "left", left, None, check=False)


def ext_tor_duality(A, P, Q, window):
    """The natural pairing Ext_A(Q, P_dual) ~ Tor_A(P, Q)_dual.

    P a right module, Q a left module.  Returns (ext_table, tor_table,
    pairings) where pairings[(p, t)] is the exact pairing matrix between
    Ext^{p,t} and Tor_{p,-t}; every pairing is verified perfect on
    certified cells.

    Chain level: a cochain phi: words (x) Q -> P_dual pairs against a chain
    m (x) w (x) q by (-1)^{|phi||m|} phi(w (x) q)(m); this descends to
    homology with the package's Ext differential convention.
    """
    Pd = dual_left_of_right(P if P.side != "bi" else restrict_side(P, "right"))
    QL = restrict_side(Q, "left") if Q.side == "bi" else Q
    PR = restrict_side(P, "right") if P.side == "bi" else P
    ext_table = ext(A, QL, Pd, window, label="Ext(Q,P^)")
    tor_table = tor(A, PR, QL, window, label="Tor(P,Q)")
    F = A.field
    pairings = {}
    for (p, t) in ext_table.bidegrees():
        ec = ext_table.cell(p, t)
        tc = tor_table.cell(p, -t)
        if ec is None or ec.dim == 0:
            continue
        if tc is None or tc.dim == 0:
            if ec.certified and (tc is None or tor_table.certified(p, -t)):
                raise ValueError(
                    f"duality dimension mismatch at {(p, t)}: {ec.dim} vs 0"
                )
            continue
        cx = ext_table.complex
        barc = tor_table.complex
        phi_par = (p + t) % 2
        entries = {}
        tor_basis = barc.basis(p, -t)
        ext_basis = cx.basis(p, t)
        for jE, rep in enumerate(ec.reps):
            for jT, trep in enumerate(tc.reps):
                s = F.zero()
                for cidx, cc in rep.items():
                    (w, kq, lp) = ext_basis[cidx]
                    for tidx, tcc in trep.items():
                        (m, w2, q2) = tor_basis[tidx]
                        if w2 != w or q2 != kq or lp != f"{m}^":
                            continue
                        v = F.mul(cc, tcc)
                        if phi_par and (P.deg(m) % 2):
                            v = F.neg(v)
                        s = F.add(s, v)
                if not F.is_zero(s):
                    entries[(jT, jE)] = s
        mat = SparseMatrix(F, tc.dim, ec.dim, entries)
        if ec.certified and tor_table.certified(p, -t):
            if ec.dim != tc.dim or mat.rank() != ec.dim:
                raise ValueError(f"duality pairing degenerate at {(p, t)}")
        pairings[(p, t)] = mat
    return ext_table, tor_table, pairings


# ---------------------------------------------------------------------------
# Gorenstein certification


class GorensteinVerdict:
    def __init__(self, status, dimension=None, generator=None, table=None, detail=""):
        self.status = status  # "Gorenstein" | "NotGorenstein" | "Uncertified"
        self.dimension = dimension
        self.generator = generator
        self.table = table
        self.detail = detail

    def __repr__(self):
        if self.status == "Gorenstein":
            return f"Gorenstein(dimension={self.dimension})"
        return self.status


def socle_basis(A):
    """Per-degree basis of {x : x . A^+ = 0}, the socle of A."""
    F = A.field
    out = {}
    pos = list(A.positive_labels())
    for n in A.space.degrees():
        labels = A.space.labels(n)
        if not labels:
            continue
        # stack multiplication-by-a matrices over all positive a
        entries = {}
        row_base = 0
        for a in pos:
            da = A.deg(a)
            tgt = A.space.labels(n + da)
            tgt_idx = {l: i for i, l in enumerate(tgt)}
            for j, x in enumerate(labels):
                for m, c in A.basis_product(x, a).items():
                    entries[(row_base + tgt_idx[m], j)] = c
            row_base += len(tgt)
        mat = SparseMatrix(F, row_base, len(labels), entries)
        _, kernel, _, _ = mat.rank_kernel_image()
        if kernel:
            out[n] = [
                {labels[i]: c for i, c in vec.items()} for vec in kernel
            ]
    return out


def gorenstein_certify(A, window=None):
    """Certify dim Ext_A(K, A) concentrated in one degree with dimension 1.

    For an honestly finite-dimensional connected graded-commutative algebra
    the verdict is window-independent: Ext^0 = Hom_A(K, A) is the socle, and
    a one-dimensional socle makes A self-injective, killing all higher Ext.
    A window-truncated stand-in for an infinite algebra can never certify;
    the windowed Ext table is returned as the best certified range.
    """
    if A.truncated_at is not None:
        if window is None:
            window = Window(4, 4 * A.truncated_at)
        k = trivial_bimodule(A)
        table = ext(
            A,
            restrict_side(k, "left"),
            restrict_side(algebra_as_bimodule(A), "left"),
            window,
            label="Ext(K,A)",
        )
        return GorensteinVerdict(
            "Uncertified",
            table=table,
            detail="algebra is a window truncation; Ext computed on the window only",
        )
    soc = socle_basis(A)
    total = sum(len(v) for v in soc.values())
    if total == 1:
        ((m, gens),) = soc.items()
        return GorensteinVerdict(
            "Gorenstein",
            dimension=m,
            generator=gens[0],
            detail="one-dimensional socle; self-injectivity kills higher Ext",
        )
    return GorensteinVerdict(
        "NotGorenstein",
        detail=f"socle has total dimension {total} in degrees {sorted(soc)}",
    )
