"""Normalized bar complexes: the generic two-sided engine and the structured
multi-block engines used for Hochschild-type pages.

Sign conventions (fixed package-wide; each is enforced by tests):

* a bar letter a carries the shifted parity <a> = |a| + 1 (mod 2);
* the differential of K (x) Abar^p (x) L merges at gaps 0..p, the gap-i term
  carrying (-1)^{e_i} with e_i the parity of everything up to and including
  the left member of the merged pair:

      d(k[a_1|..|a_p]l) = sum_i (-1)^{e_i} (merge at gap i),
      e_0 = |k|,  e_i = |k| + <a_1> + ... + <a_i>;

* tensor products of complexes differentiate by d(x(x)y) = dx(x)y +
  (-1)^{tot x} x(x)dy with tot the shifted total degree;
* maps evaluate through tensors with Koszul signs in shifted parities, so an
  induced map F of odd total degree anticommutes:  F d = (-1)^{|F|} d F;
* the resolution diagonal splits with sign (-1)^{tot(front) + i}:

      c(k[w]l) = sum_i (-1)^{tot(k[w<=i]) + i} (k[w<=i] 1) (x)_A (1 [w>i] l);

* the shuffle of two bar complexes carries the pure Koszul sign of the item
  rearrangement in shifted parities (no extra shuffle signs).
"""

from __future__ import annotations

import itertools

from .field import check_same_field
from .graded import GradedVectorSpace, vadd
from .linalg import SparseMatrix


def shifted_parity(deg):
    return (deg + 1) % 2


def word_total(A, word):
    """Shifted total degree of a bar word (sum of |a| - 1)."""
    return sum(A.deg(a) - 1 for a in word)


def word_internal(A, word):
    return sum(A.deg(a) for a in word)


def enumerate_words(A, length, max_internal):
    """All bar words over the positive-degree basis of A, deterministic order."""
    letters = sorted(
        (lbl for lbl in A.positive_labels()),
        key=lambda l: (A.deg(l), l),
    )
    if length == 0:
        yield ()
        return
    mindeg = min((A.deg(l) for l in letters), default=None)
    if mindeg is None:
        return

    def rec(prefix, budget, remaining):
        if remaining == 0:
            yield tuple(prefix)
            return
        if budget < remaining * mindeg:
            return
        for l in letters:
            d = A.deg(l)
            if d <= budget - (remaining - 1) * mindeg:
                prefix.append(l)
                yield from rec(prefix, budget - d, remaining - 1)
                prefix.pop()

    yield from rec([], max_internal, length)


class Window:
    """Computation window: bar length <= max_p, internal degree <= max_q."""

    __slots__ = ("max_p", "max_q")

    def __init__(self, max_p, max_q):
        if max_p < 0 or max_q < 0:
            raise ValueError("window bounds must be nonnegative")
        self.max_p = max_p
        self.max_q = max_q

    def __repr__(self):
        return f"Window(max_p={self.max_p}, max_q={self.max_q})"

    def __eq__(self, other):
        return (
            isinstance(other, Window)
            and (self.max_p, self.max_q) == (other.max_p, other.max_q)
        )


class BarComplex:
    """The normalized two-sided bar complex K (x) Abar^p (x) L.

    K is a right A-module, L a left A-module; chain basis elements are
    triples (k_label, word, l_label) graded by (bar length p, internal
    degree q).  The differential lowers p by one and preserves q.
    """

    def __init__(self, A, K, L, window: Window):
        check_same_field(A.field, K.field, L.field)
        if A.space.dim(0) != 1:
            raise ValueError("bar construction needs a connected augmented algebra")
        self.A = A
        self.K = K
        self.L = L
        self.window = window
        self.field = A.field
        self._basis = {}
        self._index = {}
        self._diff = {}
        self._build_basis()

    def _build_basis(self):
        A, K, L = self.A, self.K, self.L
        kdegs = {n: K.space.labels(n) for n in K.space.degrees()}
        ldegs = {n: L.space.labels(n) for n in L.space.degrees()}
        for p in range(self.window.max_p + 1):
            words_by_deg = {}
            for w in enumerate_words(A, p, self.window.max_q):
                words_by_deg.setdefault(word_internal(A, w), []).append(w)
            for kd, klbls in kdegs.items():
                for wd, ws in words_by_deg.items():
                    for ld, llbls in ldegs.items():
                        q = kd + wd + ld
                        if q > self.window.max_q:
                            continue
                        cell = self._basis.setdefault((p, q), [])
                        for k in klbls:
                            for w in ws:
                                for l in llbls:
                                    cell.append((k, w, l))
        for key, cell in self._basis.items():
            cell.sort()
            self._index[key] = {elt: i for i, elt in enumerate(cell)}

    def basis(self, p, q):
        return self._basis.get((p, q), [])

    def dim(self, p, q):
        return len(self._basis.get((p, q), ()))

    def bidegrees(self):
        return sorted(self._basis)

    def index(self, p, q, elt):
        return self._index[(p, q)][elt]

    def total_degree(self, elt):
        k, w, l = elt
        return self.K.deg(k) + word_total(self.A, w) + self.L.deg(l)

    def differential_terms(self, elt):
        """d of a single basis element as {basis_elt: scalar} (one lower p)."""
        A, K, L, F = self.A, self.K, self.L, self.field
        k, w, l = elt
        p = len(w)
        out = {}
        prefix = K.deg(k) % 2
        for i in range(p + 1):
            if i == 0:
                sgn = prefix
                img = K.act_right({k: F.one()}, {w[0]: F.one()}) if p else {}
                for k2, c in img.items():
                    key = (k2, w[1:], l)
                    vadd(F, out, key, c if sgn == 0 else F.neg(c))
                continue
            prefix = (prefix + shifted_parity(A.deg(w[i - 1]))) % 2
            sgn = prefix
            if i < p:
                prod = A.basis_product(w[i - 1], w[i])
                for m, c in prod.items():
                    if A.deg(m) == 0:
                        continue  # normalized bar: unit letters are dropped
                    key = (k, w[: i - 1] + (m,) + w[i + 1 :], l)
                    vadd(F, out, key, c if sgn == 0 else F.neg(c))
            else:
                img = L.act_left({w[p - 1]: F.one()}, {l: F.one()})
                for l2, c in img.items():
                    key = (k, w[: p - 1], l2)
                    vadd(F, out, key, c if sgn == 0 else F.neg(c))
        return out

    def differential(self, p, q):
        """Matrix of d: C_{p,q} -> C_{p-1,q}."""
        key = (p, q)
        if key in self._diff:
            return self._diff[key]
        F = self.field
        src = self.basis(p, q)
        tgt_index = self._index.get((p - 1, q), {})
        entries = {}
        for j, elt in enumerate(src):
            for term, c in self.differential_terms(elt).items():
                i = tgt_index.get(term)
                if i is None:
                    continue
                entries[(i, j)] = F.add(entries.get((i, j), F.zero()), c)
        m = SparseMatrix(F, self.dim(p - 1, q), len(src), entries)
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

    def certified(self, p, q):
        """Homology at (p, q) is exact iff chains at p+1 and all lower p are
        complete at internal degree q."""
        if p + 1 > self.window.max_p or q > self.window.max_q:
            return False
        t = self.trust_degree()
        return t is None or q <= t


def augmentation_exact(bar: BarComplex):
    """Exactness of the augmented complex C_* -> (K (x)_A L) over the window.

    For K = A (acting on itself) the augmented bar complex resolves L: the
    homology vanishes in bar length p >= 1 on every certified bidegree and
    H_0 = L.  Returns (ok, failures) where failures lists offending (p, q).
    """
    failures = []
    for (p, q) in bar.bidegrees():
        if p == 0 or not bar.certified(p, q):
            continue
        d_in = bar.differential(p + 1, q)
        d_out = bar.differential(p, q)
        rank_out = d_out.rank()
        rank_in = d_in.rank()
        if bar.dim(p, q) - rank_out != rank_in:
            failures.append((p, q))
    return (not failures), failures


# ---------------------------------------------------------------------------
# induced maps and the shuffle on the generic engine


def induced_chain_map(src: BarComplex, dst: BarComplex, phi, f, g, fdeg=0, gdeg=0):
    """Chain map of bar complexes induced by (phi, f, g).

    phi : algebra map A -> A' (degree 0, unital), applied letterwise;
    f   : right-module map K -> K' over phi, given as label -> vector, of
          degree fdeg;
    g   : left-module map L -> L' over phi, degree gdeg, satisfying
          g(a l) = (-1)^{gdeg |a|} phi(a) g(l).

    Evaluation follows the Koszul rule: the g-factor passes k and the word
    (shifted parities); the total map has degree fdeg + gdeg and satisfies
    F d = (-1)^{fdeg+gdeg} d F.
    Returns {(p, q): SparseMatrix from src cell to dst cell (p, q + fdeg + gdeg)}.
    """
    F = src.field
    shift = fdeg + gdeg
    blocks = {}
    for (p, q), cell in src._basis.items():
        tgt_index = dst._index.get((p, q + shift), {})
        entries = {}
        for j, (k, w, l) in enumerate(cell):
            fk = f(k)
            if not fk:
                continue
            gl = g(l)
            if not gl:
                continue
            # map the word letterwise through phi, distributing
            expanded = [(tuple(), F.one())]
            dead = False
            for a in w:
                img = phi(a)
                if not img:
                    dead = True
                    break
                new = []
                for (wpref, c) in expanded:
                    for b, cb in img.items():
                        new.append((wpref + (b,), F.mul(c, cb)))
                expanded = new
            if dead:
                continue
            sgn_g = (gdeg % 2) * ((src.K.deg(k) + word_total(src.A, w)) % 2)
            for k2, ck in fk.items():
                for wimg, cw in expanded:
                    for l2, cl in gl.items():
                        key = (k2, wimg, l2)
                        i = tgt_index.get(key)
                        if i is None:
                            continue
                        c = F.mul(F.mul(ck, cw), cl)
                        if sgn_g:
                            c = F.neg(c)
                        entries[(i, j)] = F.add(
                            entries.get((i, j), F.zero()), c
                        )
        blocks[(p, q)] = SparseMatrix(
            F, dst.dim(p, q + shift), len(cell), entries
        )
    return blocks


def shuffle_chain_map(src1: BarComplex, src2: BarComplex, dst: BarComplex,
                      k_join, l_join):
    """The shuffle quasi-isomorphism B(K,A,L) (x) B(K',A',L') -> B(K'',A'',L'').

    A'' must be the tensor algebra of A and A' (letters a -> a(x)1, b -> 1(x)b);
    k_join(k, k') and l_join(l, l') name the basis of K'' = K(x)K' and
    L'' = L(x)L'.  Signs are the Koszul signs of the item rearrangement

        k, a_1..a_p, l, k', b_1..b_q, l'  ->  (k,k'), shuffle, (l,l')

    with letters in shifted parity.  Returns a map keyed by
    ((p1,q1),(p2,q2)) -> SparseMatrix into the (p1+p2, q1+q2) cell of dst.
    """
    F = dst.field
    A1, A2 = src1.A, src2.A
    out = {}
    for (p1, q1), cell1 in src1._basis.items():
        for (p2, q2), cell2 in src2._basis.items():
            p, q = p1 + p2, q1 + q2
            tgt_index = dst._index.get((p, q), {})
            if not tgt_index and dst.dim(p, q) == 0 and (p > dst.window.max_p or q > dst.window.max_q):
                out[((p1, q1), (p2, q2))] = SparseMatrix(
                    F, 0, len(cell1) * len(cell2), {}
                )
                continue
            entries = {}
            for j1, (k1, w1, l1) in enumerate(cell1):
                t_w1 = [shifted_parity(A1.deg(a)) for a in w1]
                for j2, (k2, w2, l2) in enumerate(cell2):
                    j = j1 * len(cell2) + j2
                    t_w2 = [shifted_parity(A2.deg(b)) for b in w2]
                    base = (src2.K.deg(k2) % 2) * ((sum(t_w1) + src1.L.deg(l1)) % 2)
                    base = (base + (src1.L.deg(l1) % 2) * (sum(t_w2) % 2)) % 2
                    kk = k_join(k1, k2)
                    ll = l_join(l1, l2)
                    for positions in itertools.combinations(range(p1 + p2), p1):
                        posset = set(positions)
                        word = []
                        i1 = i2 = 0
                        e = base
                        seen_b = 0
                        for t in range(p1 + p2):
                            if t in posset:
                                word.append(f"{w1[i1]}⊗{A2.unit}")
                                e = (e + t_w1[i1] * seen_b) % 2
                                i1 += 1
                            else:
                                word.append(f"{A1.unit}⊗{w2[i2]}")
                                seen_b = (seen_b + t_w2[i2]) % 2
                                i2 += 1
                        key = (kk, tuple(word), ll)
                        i = tgt_index.get(key)
                        if i is None:
                            continue
                        c = F.one() if e == 0 else F.from_int(-1)
                        entries[(i, j)] = F.add(entries.get((i, j), F.zero()), c)
            out[((p1, q1), (p2, q2))] = SparseMatrix(
                F, dst.dim(p, q), len(cell1) * len(cell2), entries
            )
    return out
