"""Graded commutative algebras, modules and bimodules, tensor powers,
pullbacks along coordinate maps, and construction-time verification.

Every algebra is connected (degree 0 spanned by the unit) and nonnegatively
graded.  All structure constants are verified exactly at construction:
associativity on basis triples, two-sided unit, and graded commutativity
when the commutative flag is set.  A window-truncated algebra is an honest
finite-dimensional quotient A/(degrees > w); the ``truncated_at`` attribute
records that it stands in for an infinite algebra, and downstream engines
refuse to certify results that could see the missing degrees.

Sign conventions used throughout the package:

* tensor algebra:   (a (x) b)(a' (x) b') = (-1)^{|b||a'|} (a a') (x) (b b')
* left module maps of degree |f|:  f(a m) = (-1)^{|f||a|} a f(m)
* bimodule as left module over the tensor square (A commutative):
      (a (x) b) . m = (-1)^{|b||m|} a m b
* dual bimodule:   (a . phi)(m) = (-1)^{|a|(|phi|+|m|)} phi(m a),
                   (phi . b)(m) = phi(b m)
"""

from __future__ import annotations

import itertools

from .field import check_same_field
from .graded import TENSOR_SEP, GradedMap, GradedVectorSpace, vadd, vcomb


class AlgebraConstructionError(ValueError):
    """Structure constants violate an algebra axiom."""


class GradedAlgebra:
    """A graded algebra on a named basis with sparse structure constants.

    ``mul[(a, b)]`` is the expansion of the product of basis elements a, b as
    ``{label: scalar}``; absent pairs multiply to zero.
    """

    def __init__(
        self,
        space,
        unit,
        mul,
        commutative=True,
        truncated_at=None,
        presentation=None,
        check=True,
    ):
        self.space = space
        self.field = space.field
        self.unit = unit
        self.mul = {k: dict(v) for k, v in mul.items() if v}
        self.commutative = commutative
        self.truncated_at = truncated_at
        self.presentation = presentation or {}
        if check:
            self._validate()

    # -- structure ---------------------------------------------------------

    def deg(self, label):
        return self.space.degree_of(label)

    @property
    def simply_connected(self):
        return self.space.dim(1) == 0 and self.space.dim(0) == 1

    def top_degree(self):
        return max(self.space.degrees())

    def positive_labels(self):
        for n in self.space.degrees():
            if n > 0:
                yield from self.space.labels(n)

    def basis_product(self, a, b):
        if a == self.unit:
            return {b: self.field.one()}
        if b == self.unit:
            return {a: self.field.one()}
        return self.mul.get((a, b), {})

    def product(self, x, y):
        """Product of two label-keyed vectors."""
        F = self.field
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                vcomb(F, out, self.basis_product(a, b), F.mul(ca, cb))
        return out

    def unit_vector(self):
        return {self.unit: self.field.one()}

    def augmentation(self, vec):
        """Coefficient of the unit (the canonical augmentation A -> K)."""
        return vec.get(self.unit, self.field.zero())

    def element_from_coeffs(self, coeffs):
        return {lbl: c for lbl, c in coeffs.items() if not self.field.is_zero(c)}

    # -- verification ------------------------------------------------------

    def _validate(self):
        F = self.field
        if any(n < 0 for n in self.space.degrees()):
            raise AlgebraConstructionError("negative-degree algebra basis")
        if self.space.dim(0) != 1 or self.space.labels(0)[0] != self.unit:
            raise AlgebraConstructionError("degree 0 must be spanned by the unit")
        for (a, b), v in self.mul.items():
            da, db = self.deg(a), self.deg(b)
            for lbl, c in v.items():
                if F.is_zero(c):
                    continue
                if self.deg(lbl) != da + db:
                    raise AlgebraConstructionError(
                        f"product {a}*{b} lands in degree {self.deg(lbl)}, "
                        f"expected {da + db}"
                    )
        labels = list(self.space.all_labels())
        # stored unit rows, if any, must agree with the hardwired unit law
        for (a, b), v in list(self.mul.items()):
            if self.unit in (a, b):
                expect = {b if a == self.unit else a: F.one()}
                if v != expect:
                    raise AlgebraConstructionError(f"unit violated on ({a}, {b})")
                del self.mul[(a, b)]
        if self.commutative:
            for a in labels:
                for b in labels:
                    ab = self.basis_product(a, b)
                    ba = self.basis_product(b, a)
                    sign = -1 if (self.deg(a) % 2) and (self.deg(b) % 2) else 1
                    expect = {
                        k: (F.neg(v) if sign < 0 else v) for k, v in ba.items()
                    }
                    if ab != expect:
                        raise AlgebraConstructionError(
                            f"graded commutativity fails on ({a}, {b})"
                        )
        for a in labels:
            for b in labels:
                ab = self.basis_product(a, b)
                for c in labels:
                    # (ab)c vs a(bc); truncation by total degree is an ideal,
                    # so both sides truncate identically
                    left = {}
                    for m, cm in ab.items():
                        vcomb(F, left, self.basis_product(m, c), cm)
                    right = {}
                    for m, cm in self.basis_product(b, c).items():
                        vcomb(F, right, self.basis_product(a, m), cm)
                    if left != right:
                        raise AlgebraConstructionError(
                            f"associativity fails on ({a}, {b}, {c})"
                        )

    # -- derived structures -------------------------------------------------

    def multiplication_gmap(self, square=None):
        """A (x) A -> A as a GradedMap (square defaults to tensor_power(self, 2))."""
        sq = square or tensor_power(self, 2)
        F = self.field

        def fn(label):
            a, b = sq.split(label)
            return self.basis_product(a, b)

        return GradedMap.from_function(sq.space, self.space, 0, fn)

    def trust_degree(self):
        """Largest internal degree whose basis is complete (None = all)."""
        return self.truncated_at

    def __repr__(self):
        name = self.presentation.get("name", "algebra")
        return f"<GradedAlgebra {name} dim={self.space.total_dim()}>"


class TensorAlgebra(GradedAlgebra):
    """Tensor power/product algebra that remembers how to split basis labels."""

    def __init__(self, factors, space, unit, mul, split_table, **kw):
        self.factors = tuple(factors)
        self._split = split_table
        super().__init__(space, unit, mul, **kw)

    def split(self, label):
        return self._split[label]

    def join(self, parts):
        return TENSOR_SEP.join(parts)


# ---------------------------------------------------------------------------
# presets


def _monomial_space(field, monomials):
    basis = {}
    for lbl, d in monomials:
        basis.setdefault(d, []).append(lbl)
    for d in basis:
        basis[d].sort()
    return GradedVectorSpace(field, basis)


def point_algebra(field):
    space = GradedVectorSpace(field, {0: ("1",)})
    return GradedAlgebra(
        space, "1", {}, commutative=True, presentation={"name": "point", "preset": "point"}
    )


def free_commutative_algebra(field, generators, max_degree, truncated_at=None, name=None):
    """Free graded-commutative algebra on ``generators`` = [(name, degree)],
    truncated above ``max_degree``.

    Odd generators square to zero when char != 2; over F_2 odd generators are
    treated as polynomial unless a relation truncates them, so exterior
    presets over F_2 must pass explicit heights instead of relying on parity.
    """
    return _quotient_monomial_algebra(
        field, generators, {}, max_degree, truncated_at, name
    )


def _quotient_monomial_algebra(field, generators, heights, max_degree, truncated_at, name):
    """Monomial basis of prod x_i^{e_i} with e_i < heights.get(x_i, inf),
    odd x_i forced to height 2 when char != 2, all monomials of degree <= max_degree."""
    gens = list(generators)
    if any(d <= 0 for _, d in gens):
        raise AlgebraConstructionError("generator degrees must be positive")
    char2 = field.characteristic == 2
    caps = []
    for g, d in gens:
        h = heights.get(g)
        if d % 2 and not char2:
            if h is None:
                h = 2
            elif h > 2:
                raise AlgebraConstructionError(
                    f"odd generator {g} cannot have height {h} in characteristic != 2"
                )
        caps.append(h)

    def label_of(exps):
        parts = []
        for (g, _), e in zip(gens, exps):
            if e == 1:
                parts.append(g)
            elif e > 1:
                parts.append(f"{g}^{e}")
        return "*".join(parts) if parts else "1"

    monomials = []
    exps_list = []

    def rec(i, exps, deg):
        if i == len(gens):
            monomials.append((label_of(exps), deg))
            exps_list.append(tuple(exps))
            return
        g, d = gens[i]
        e = 0
        while deg + e * d <= max_degree and (caps[i] is None or e < caps[i]):
            exps.append(e)
            rec(i + 1, exps, deg + e * d)
            exps.pop()
            e += 1

    rec(0, [], 0)
    space = _monomial_space(field, monomials)
    by_exp = {e: label_of(e) for e in exps_list}
    degs = {e: sum(k * d for k, (_, d) in zip(e, gens)) for e in exps_list}

    def koszul_merge_sign(e1, e2):
        # sign from interleaving odd generators of the two monomials written
        # in generator order: moving each odd gen of e2 past the odd gens of
        # e1 that come later in the order
        sign = 0
        odd_e1_after = [0] * (len(gens) + 1)
        for i in range(len(gens) - 1, -1, -1):
            odd_e1_after[i] = odd_e1_after[i + 1] + (
                e1[i] if gens[i][1] % 2 else 0
            )
        for i, (_, d) in enumerate(gens):
            if d % 2 and e2[i] % 2:
                sign += odd_e1_after[i + 1]
        return sign % 2

    mul = {}
    F = field
    for e1 in exps_list:
        for e2 in exps_list:
            e = tuple(a + b for a, b in zip(e1, e2))
            if e not in by_exp:
                continue  # killed by height relation or degree truncation
            # odd gen squared (char != 2): e has exponent 2 only if cap allowed;
            # caps already exclude it, and e1[i] = e2[i] = 1 odd-odd would give
            # e[i] = 2 -- excluded by cap 2, so no explicit zero needed
            s = koszul_merge_sign(e1, e2)
            c = F.one() if s == 0 else F.from_int(-1)
            a, b = by_exp[e1], by_exp[e2]
            if a == "1" or b == "1":
                continue
            mul[(a, b)] = {by_exp[e]: c}
    pres = {
        "name": name or "*".join(g for g, _ in gens),
        "generators": [[g, d] for g, d in gens],
        "heights": {g: heights[g] for g in heights},
        "max_degree": max_degree,
    }
    return GradedAlgebra(
        space,
        "1",
        mul,
        commutative=True,
        truncated_at=truncated_at,
        presentation=pres,
    )


def exterior_algebra(field, degrees, names=None):
    """Lambda(x_{n1}, ..., x_{nr}) on odd-degree generators.

    Over F_2, squares do not vanish for parity reasons, so the square-zero
    relations are imposed explicitly (height 2); this matches declaring the
    relations rather than inferring them.
    """
    if isinstance(degrees, int):
        degrees = [degrees]
    names = names or [f"x{d}" if degrees.count(d) == 1 else f"x{d}_{i}"
                      for i, d in enumerate(degrees)]
    gens = list(zip(names, degrees))
    heights = {g: 2 for g, _ in gens}
    maxdeg = sum(degrees)
    alg = _quotient_monomial_algebra(field, gens, heights, maxdeg, None, None)
    alg.presentation["preset"] = "exterior"
    alg.presentation["name"] = "L(" + ",".join(f"{g}:{d}" for g, d in gens) + ")"
    return alg


def truncated_polynomial(field, degree, height, name="x"):
    """K[x]/(x^{height+1}) with |x| = degree (so basis 1, x, ..., x^height)."""
    if degree % 2 and field.characteristic != 2 and height > 1:
        raise AlgebraConstructionError(
            "odd-degree truncated polynomial of height > 1 needs characteristic 2"
        )
    alg = _quotient_monomial_algebra(
        field, [(name, degree)], {name: height + 1}, degree * height, None, None
    )
    alg.presentation["preset"] = "truncated_poly"
    alg.presentation["name"] = f"{name}[{degree}]/{name}^{height + 1}"
    return alg


def polynomial_window(field, degrees, max_degree, names=None):
    """K[x_1, ..., x_r] truncated above max_degree; records the truncation."""
    if isinstance(degrees, int):
        degrees = [degrees]
    names = names or [f"x{d}" if degrees.count(d) == 1 else f"x{d}_{i}"
                      for i, d in enumerate(degrees)]
    gens = list(zip(names, degrees))
    alg = _quotient_monomial_algebra(field, gens, {}, max_degree, max_degree, None)
    alg.presentation["preset"] = "poly_window"
    alg.presentation["name"] = (
        "K[" + ",".join(f"{g}:{d}" for g, d in gens) + f"]<= {max_degree}"
    )
    return alg


def tensor_algebra(A, B, truncate_at=None):
    """A (x) B with the Koszul product rule."""
    check_same_field(A.field, B.field)
    F = A.field
    pairs = []
    for a in A.space.all_labels():
        for b in B.space.all_labels():
            d = A.deg(a) + B.deg(b)
            if truncate_at is not None and d > truncate_at:
                continue
            pairs.append((a, b))
    split_table = {}
    basis = {}
    for a, b in pairs:
        lbl = f"{a}{TENSOR_SEP}{b}"
        split_table[lbl] = _flatten(A, a) + _flatten(B, b)
        basis.setdefault(A.deg(a) + B.deg(b), []).append(lbl)
    order = {f"{a}{TENSOR_SEP}{b}": (A.deg(a), A.space.index_of(a), B.deg(b), B.space.index_of(b))
             for a, b in pairs}
    for d in basis:
        basis[d].sort(key=lambda lbl: order[lbl])
    space = GradedVectorSpace(F, basis)
    unit = f"{A.unit}{TENSOR_SEP}{B.unit}"
    mul = {}
    for a1, b1 in pairs:
        for a2, b2 in pairs:
            l1 = f"{a1}{TENSOR_SEP}{b1}"
            l2 = f"{a2}{TENSOR_SEP}{b2}"
            if l1 == unit or l2 == unit:
                continue
            aa = A.basis_product(a1, a2)
            bb = B.basis_product(b1, b2)
            if not aa or not bb:
                continue
            sgn = -1 if (B.deg(b1) % 2) and (A.deg(a2) % 2) else 1
            out = {}
            for la, ca in aa.items():
                for lb, cb in bb.items():
                    lbl = f"{la}{TENSOR_SEP}{lb}"
                    if lbl not in split_table:
                        continue  # above truncation
                    c = F.mul(ca, cb)
                    if sgn < 0:
                        c = F.neg(c)
                    vadd(F, out, lbl, c)
            if out:
                mul[(l1, l2)] = out
    trunc = None
    tA, tB = A.truncated_at, B.truncated_at
    if tA is not None or tB is not None or truncate_at is not None:
        cands = [t for t in (tA, tB, truncate_at) if t is not None]
        trunc = min(cands)
    name = f"{A.presentation.get('name', '?')}(x){B.presentation.get('name', '?')}"
    alg = TensorAlgebra(
        _tensor_factors(A) + _tensor_factors(B),
        space,
        unit,
        mul,
        split_table,
        commutative=A.commutative and B.commutative,
        truncated_at=trunc,
        presentation={"name": name, "preset": "tensor"},
    )
    return alg


def _tensor_factors(A):
    return list(A.factors) if isinstance(A, TensorAlgebra) else [A]


def _flatten(A, label):
    return list(A.split(label)) if isinstance(A, TensorAlgebra) else [label]


def tensor_power(A, k, truncate_at=None):
    """A^{(x) k}; for k = 1 wraps A in a trivial TensorAlgebra view."""
    if k < 1:
        raise ValueError("tensor power needs k >= 1")
    if k == 1:
        if isinstance(A, TensorAlgebra) and len(A.factors) == 1:
            return A
        split = {lbl: [lbl] for lbl in A.space.all_labels()}
        return TensorAlgebra(
            [A],
            A.space,
            A.unit,
            A.mul,
            split,
            commutative=A.commutative,
            truncated_at=A.truncated_at,
            presentation=dict(A.presentation),
            check=False,
        )
    out = A
    for _ in range(k - 1):
        out = tensor_algebra(out, A, truncate_at=truncate_at)
    return out


# ---------------------------------------------------------------------------
# coordinate maps between tensor powers


def pullback_along(A, coord_map, Ak, Aj):
    """Pullback A^{(x) k} -> A^{(x) j} of the coordinate map

        M^j -> M^k,  (x_1..x_j) |-> (x_{coord_map[1]}, ..., x_{coord_map[k]})

    where ``coord_map`` is a length-k tuple with values in 0..j-1, ``Ak`` the
    source power A^{(x) k} and ``Aj`` the target power A^{(x) j}.  On basis
    monomials a_1 (x) ... (x) a_k this routes factor t to slot coord_map[t],
    with the Koszul sign of the stable sort by slot, then multiplies within
    each slot in arrival order.

    Examples: the full diagonal (j=1) pulls back to the k-fold product; the
    swap (j=k=2, map (1,0)) gives a(x)b -> (-1)^{|a||b|} b(x)a.
    """
    k = len(coord_map)
    j = len(_tensor_factors(Aj))
    if any(not (0 <= s < j) for s in coord_map):
        raise ValueError("coordinate map out of range")
    F = A.field

    def fn(label):
        parts = Ak.split(label) if isinstance(Ak, TensorAlgebra) else [label]
        items = [(coord_map[t], parts[t], A.deg(parts[t])) for t in range(k)]
        # stable insertion sort by slot, tracking the Koszul sign
        sign = 0
        items = list(items)
        for i in range(1, len(items)):
            p = i
            while p > 0 and items[p - 1][0] > items[p][0]:
                sign += items[p - 1][2] * items[p][2]
                items[p - 1], items[p] = items[p], items[p - 1]
                p -= 1
        # multiply within each slot
        slot_elts = []
        for s in range(j):
            elt = {A.unit: F.one()}
            for slot, lbl, _ in items:
                if slot == s:
                    new = {}
                    for m, cm in elt.items():
                        vcomb(F, new, A.basis_product(m, lbl), cm)
                    elt = new
            slot_elts.append(elt)
        # assemble the tensor-product element in Aj
        out = {}
        for combo in itertools.product(*[list(e.items()) for e in slot_elts]):
            lbl = TENSOR_SEP.join(c[0] for c in combo)
            if lbl not in Aj.space:
                continue  # truncated away
            c = F.one()
            for _, cc in combo:
                c = F.mul(c, cc)
            vadd(F, out, lbl, c)
        if sign % 2:
            out = {m: F.neg(c) for m, c in out.items()}
        return out

    gm = GradedMap.from_function(Ak.space, Aj.space, 0, fn)
    return AlgebraMap(Ak, Aj, gm)


class AlgebraMap:
    """A degree-0 multiplicative unital map between graded algebras."""

    def __init__(self, source, target, gmap, check=False):
        self.source = source
        self.target = target
        self.gmap = gmap
        if check:
            self.check_multiplicative()

    def __call__(self, vec):
        return self.gmap(vec)

    def on_label(self, lbl):
        return self.gmap({lbl: self.source.field.one()})

    def check_multiplicative(self):
        F = self.source.field
        if self(self.source.unit_vector()) != self.target.unit_vector():
            raise AlgebraConstructionError("algebra map does not preserve the unit")
        for a in self.source.space.all_labels():
            for b in self.source.space.all_labels():
                lhs = self(self.source.basis_product(a, b))
                rhs = self.target.product(self.on_label(a), self.on_label(b))
                if lhs != rhs:
                    raise AlgebraConstructionError(
                        f"map not multiplicative on ({a}, {b})"
                    )

    def compose(self, other):
        return AlgebraMap(other.source, self.target, self.gmap.compose(other.gmap))


def augmentation_map(A, point=None):
    """A -> K (the point algebra), killing positive degrees."""
    pt = point or point_algebra(A.field)
    F = A.field

    def fn(lbl):
        if lbl == A.unit:
            return {pt.unit: F.one()}
        return {}

    return AlgebraMap(A, pt, GradedMap.from_function(A.space, pt.space, 0, fn))


def unit_map(A, point=None):
    pt = point or point_algebra(A.field)
    F = A.field

    def fn(lbl):
        return {A.unit: F.one()}

    return AlgebraMap(pt, A, GradedMap.from_function(pt.space, A.space, 0, fn))


def algebra_map_from_generator_images(A, B, images, check=True):
    """Algebra map A -> B determined by generator images.

    ``images`` maps generator names of A's monomial presentation to elements
    of B (label-keyed dicts).  Requires A to have a generators presentation.
    """
    gens = A.presentation.get("generators")
    if gens is None:
        raise AlgebraConstructionError("source algebra has no generator presentation")
    F = A.field

    def image_of_label(lbl):
        if lbl == A.unit:
            return B.unit_vector()
        out = B.unit_vector()
        for part in lbl.split("*"):
            if "^" in part:
                g, e = part.split("^")
                e = int(e)
            else:
                g, e = part, 1
            img = images[g]
            for _ in range(e):
                out = B.product(out, img)
        return out

    gm = GradedMap.from_function(
        A.space, B.space, 0, image_of_label
    )
    return AlgebraMap(A, B, gm, check=check)


# ---------------------------------------------------------------------------
# modules


class GradedModule:
    """One- or two-sided module over a graded algebra.

    Actions are sparse tables: ``left[(a, m)]`` and ``right[(m, a)]`` expand
    to {label: scalar}.  Absent pairs act by zero; the unit always acts as
    the identity and is never stored.
    """

    def __init__(self, algebra, space, side, left=None, right=None, check=True):
        if side not in ("left", "right", "bi"):
            raise ValueError(f"bad side {side!r}")
        check_same_field(algebra.field, space.field)
        self.algebra = algebra
        self.space = space
        self.field = space.field
        self.side = side
        self.left = {k: dict(v) for k, v in (left or {}).items() if v}
        self.right = {k: dict(v) for k, v in (right or {}).items() if v}
        if check:
            self._validate()

    def deg(self, m):
        return self.space.degree_of(m)

    def act_left_basis(self, a, m):
        if a == self.algebra.unit:
            return {m: self.field.one()}
        return self.left.get((a, m), {})

    def act_right_basis(self, m, a):
        if a == self.algebra.unit:
            return {m: self.field.one()}
        return self.right.get((m, a), {})

    def act_left(self, avec, mvec):
        F = self.field
        out = {}
        for a, ca in avec.items():
            for m, cm in mvec.items():
                vcomb(F, out, self.act_left_basis(a, m), F.mul(ca, cm))
        return out

    def act_right(self, mvec, avec):
        F = self.field
        out = {}
        for m, cm in mvec.items():
            for a, ca in avec.items():
                vcomb(F, out, self.act_right_basis(m, a), F.mul(cm, ca))
        return out

    def _validate(self):
        F = self.field
        A = self.algebra
        albls = list(A.space.all_labels())
        mlbls = list(self.space.all_labels())
        if self.side in ("left", "bi"):
            for a in albls:
                for b in albls:
                    ab = A.basis_product(a, b)
                    for m in mlbls:
                        lhs = {}
                        for x, cx in ab.items():
                            vcomb(F, lhs, self.act_left_basis(x, m), cx)
                        rhs = {}
                        for x, cx in self.act_left_basis(b, m).items():
                            vcomb(F, rhs, self.act_left_basis(a, x), cx)
                        if lhs != rhs:
                            raise AlgebraConstructionError(
                                f"left action not associative on ({a}, {b}, {m})"
                            )
        if self.side in ("right", "bi"):
            for a in albls:
                for b in albls:
                    ab = A.basis_product(a, b)
                    for m in mlbls:
                        lhs = {}
                        for x, cx in ab.items():
                            vcomb(F, lhs, self.act_right_basis(m, x), cx)
                        rhs = {}
                        for x, cx in self.act_right_basis(m, a).items():
                            vcomb(F, rhs, self.act_right_basis(x, b), cx)
                        if lhs != rhs:
                            raise AlgebraConstructionError(
                                f"right action not associative on ({m}, {a}, {b})"
                            )
        if self.side == "bi":
            for a in albls:
                for b in albls:
                    for m in mlbls:
                        lhs = {}
                        for x, cx in self.act_left_basis(a, m).items():
                            vcomb(F, lhs, self.act_right_basis(x, b), cx)
                        rhs = {}
                        for x, cx in self.act_right_basis(m, b).items():
                            vcomb(F, rhs, self.act_left_basis(a, x), cx)
                        if lhs != rhs:
                            raise AlgebraConstructionError(
                                f"bimodule compatibility fails on ({a}, {m}, {b})"
                            )

    def trust_degree(self):
        return self.algebra.truncated_at


def algebra_as_bimodule(A):
    left = {}
    right = {}
    for a in A.positive_labels():
        for m in A.space.all_labels():
            am = A.basis_product(a, m)
            if am:
                left[(a, m)] = am
            ma = A.basis_product(m, a)
            if ma:
                right[(m, a)] = ma
    return GradedModule(A, A.space, "bi", left, right, check=False)


def trivial_bimodule(A, label="k"):
    space = GradedVectorSpace(A.field, {0: (label,)})
    return GradedModule(A, space, "bi", {}, {}, check=False)


def bimodule_via_map(h: AlgebraMap, M: GradedModule):
    """Pull a B-bimodule back to an A-bimodule along h: A -> B (a.m.b = h(a) m h(b))."""
    A = h.source
    F = A.field
    left = {}
    right = {}
    for a in A.positive_labels():
        ha = h.on_label(a)
        for m in M.space.all_labels():
            lm = M.act_left(ha, {m: F.one()})
            if lm:
                left[(a, m)] = lm
            rm = M.act_right({m: F.one()}, ha)
            if rm:
                right[(m, a)] = rm
    return GradedModule(A, M.space, "bi", left, right, check=False)


def dual_bimodule(M: GradedModule):
    """Graded dual of a bimodule with the package's sign conventions.

    (a . phi)(m) = (-1)^{|a|(|phi|+|m|)} phi(m a);  (phi . b)(m) = phi(b m).
    """
    A = M.algebra
    F = M.field
    dual_space = M.space.dual()
    mlbls = list(M.space.all_labels())
    left = {}
    right = {}
    for a in A.positive_labels():
        da = A.deg(a)
        for phi_src in mlbls:
            phi = f"{phi_src}^"
            dphi = -M.deg(phi_src)
            out = {}
            # (a.phi) pairs m against phi(m a): find all m with m a hitting phi_src
            for m in mlbls:
                ma = M.act_right_basis(m, a)
                c = ma.get(phi_src)
                if c is None or F.is_zero(c):
                    continue
                sgn = (da * ((dphi + M.deg(m)) % 2)) % 2
                v = c if sgn == 0 else F.neg(c)
                vadd(F, out, f"{m}^", v)
            if out:
                left[(a, phi)] = out
            out = {}
            for m in mlbls:
                bm = M.act_left_basis(a, m)
                c = bm.get(phi_src)
                if c is not None and not F.is_zero(c):
                    vadd(F, out, f"{m}^", c)
            if out:
                right[(phi, a)] = out
    return GradedModule(A, dual_space, "bi", left, right, check=False)


def restrict_side(M: GradedModule, side):
    """View a bimodule as a one-sided module."""
    if side == "left":
        return GradedModule(M.algebra, M.space, "left", M.left, None, check=False)
    return GradedModule(M.algebra, M.space, "right", None, M.right, check=False)


def bimodule_as_square_module(M: GradedModule, square=None):
    """A-bimodule as a one-sided module over A (x) A (A commutative):

        (a (x) b) . m = (-1)^{|b||m|} a m b

    Returns (module over the square, square algebra); both sides stored, the
    right action derived by graded commutation m . s = (-1)^{|m||s|} s . m.
    """
    A = M.algebra
    sq = square or tensor_power(A, 2)
    F = M.field
    left = {}
    right = {}
    for s in sq.positive_labels():
        a, b = sq.split(s)
        db = A.deg(b)
        for m in M.space.all_labels():
            dm = M.deg(m)
            mid = M.act_left_basis(a, m) if a != A.unit else {m: F.one()}
            out = {}
            for x, cx in mid.items():
                vcomb(F, out, M.act_right_basis(x, b), cx)
            if (db * dm) % 2:
                out = {k: F.neg(v) for k, v in out.items()}
            if out:
                left[(s, m)] = out
                ds = sq.deg(s)
                r = out if (ds * dm) % 2 == 0 else {k: F.neg(v) for k, v in out.items()}
                right[(m, s)] = r
    return GradedModule(sq, M.space, "bi", left, right, check=False), sq


class SlotModule:
    """A space with several mutually graded-commuting left A-actions (slots).

    Used by the multi-block bar engines, where distinct tensor factors of the
    ambient algebra act through distinct slots.
    """

    def __init__(self, algebra, space, slots, check=True):
        self.algebra = algebra
        self.space = space
        self.field = space.field
        self.slots = [dict(s) for s in slots]
        if check:
            self._validate()

    @property
    def nslots(self):
        return len(self.slots)

    def deg(self, m):
        return self.space.degree_of(m)

    def act_basis(self, slot, a, m):
        if a == self.algebra.unit:
            return {m: self.field.one()}
        return self.slots[slot].get((a, m), {})

    def act(self, slot, avec, mvec):
        F = self.field
        out = {}
        for a, ca in avec.items():
            for m, cm in mvec.items():
                vcomb(F, out, self.act_basis(slot, a, m), F.mul(ca, cm))
        return out

    def _validate(self):
        F = self.field
        A = self.algebra
        albls = [l for l in A.space.all_labels()]
        mlbls = list(self.space.all_labels())
        for s in range(self.nslots):
            for a in albls:
                for b in albls:
                    ab = A.basis_product(a, b)
                    for m in mlbls:
                        lhs = {}
                        for x, cx in ab.items():
                            vcomb(F, lhs, self.act_basis(s, x, m), cx)
                        rhs = {}
                        for x, cx in self.act_basis(s, b, m).items():
                            vcomb(F, rhs, self.act_basis(s, a, x), cx)
                        if lhs != rhs:
                            raise AlgebraConstructionError(
                                f"slot {s} action not associative on ({a},{b},{m})"
                            )
        for s in range(self.nslots):
            for t in range(s + 1, self.nslots):
                for a in albls:
                    for b in albls:
                        sgn = -1 if (A.deg(a) % 2) and (A.deg(b) % 2) else 1
                        for m in mlbls:
                            lhs = {}
                            for x, cx in self.act_basis(t, b, m).items():
                                vcomb(F, lhs, self.act_basis(s, a, x), cx)
                            rhs = {}
                            for x, cx in self.act_basis(s, a, m).items():
                                vcomb(F, rhs, self.act_basis(t, b, x), cx)
                            if sgn < 0:
                                rhs = {k: F.neg(v) for k, v in rhs.items()}
                            if lhs != rhs:
                                raise AlgebraConstructionError(
                                    f"slots {s},{t} do not graded-commute on ({a},{b},{m})"
                                )

    def trust_degree(self):
        return self.algebra.truncated_at


def slot_module_from_bimodule(M: GradedModule):
    """Two slots: slot 0 the left action, slot 1 the right action viewed as a
    left action via m.a = (-1)^{|a||m|} (slot-1 a).m."""
    A = M.algebra
    F = M.field
    slot1 = {}
    for (m, a), out in M.right.items():
        sgn = (A.deg(a) * M.deg(m)) % 2
        slot1[(a, m)] = {k: (F.neg(v) if sgn else v) for k, v in out.items()}
    return SlotModule(A, M.space, [dict(M.left), slot1], check=False)


def slot_module_tensor(K1: SlotModule, K2: SlotModule):
    """(K1 (x) K2) with K1's slots first; actions interleave with Koszul signs."""
    A = K1.algebra
    F = K1.field
    space = K1.space.tensor(K2.space)
    n1 = K1.nslots
    slots = [dict() for _ in range(n1 + K2.nslots)]
    for m1 in K1.space.all_labels():
        d1 = K1.deg(m1)
        for m2 in K2.space.all_labels():
            lbl = f"{m1}{TENSOR_SEP}{m2}"
            for s in range(n1):
                for a in A.positive_labels():
                    out = K1.act_basis(s, a, m1)
                    if out:
                        slots[s][(a, lbl)] = {
                            f"{k}{TENSOR_SEP}{m2}": v for k, v in out.items()
                        }
            for s in range(K2.nslots):
                for a in A.positive_labels():
                    out = K2.act_basis(s, a, m2)
                    if out:
                        sgn = (A.deg(a) * d1) % 2
                        slots[n1 + s][(a, lbl)] = {
                            f"{m1}{TENSOR_SEP}{k}": (F.neg(v) if sgn else v)
                            for k, v in out.items()
                        }
    return SlotModule(A, space, slots, check=False)
