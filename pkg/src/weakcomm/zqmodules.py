"""Modules over group rings of abelianizations.

A ``QModule`` is a finitely generated abelian group given by chosen
generators and a relation lattice, together with integer matrices describing
a right action of a finite group on those generators.  Equality and
membership questions are settled in Smith-form coordinates throughout.

Builders:

* ``aug_mod_I2``: the augmentation ideal of the integral group ring of a
  finite group, modulo the ideal generated by all squared differences
  (g-1)^2.  Basis {g-1 : g != 1}, right multiplication action.  This is the
  coordinate model of L/L' for the weak-commutativity double.
* ``module_from_abelian_quotient``: an abelian section num/den of a
  permutation group, with a conjugation action; used for L/L', G'/G'' and W.
* ``module_M``: the coinvariant tensor square of G'/G'' that controls the
  structure of W.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import ArgumentError, SizeGuardError, WeakcommError
from .intlinalg import FinAbGroup, IntMatrix, smith_normal_form
from .permgroups import Perm, PermGroup, quotient_realization

Vector = tuple[int, ...]


def _vec_sub(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def _vec_add(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _unit(n: int, i: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(n))


class QModule:
    """F.g. abelian group with chosen generators and a right group action."""

    def __init__(self, gen_labels: Sequence[str], relations: Sequence[Vector],
                 acting_labels: Sequence[str],
                 action_matrices: Sequence[IntMatrix],
                 check_commuting_action: bool = True):
        self.gen_labels = list(gen_labels)
        self.n = len(gen_labels)
        self.relations = [tuple(map(int, r)) for r in relations]
        for r in self.relations:
            if len(r) != self.n:
                raise ArgumentError("relation length mismatch")
        self.acting_labels = list(acting_labels)
        self.action_matrices = list(action_matrices)
        if len(self.acting_labels) != len(self.action_matrices):
            raise ArgumentError("need one matrix per acting generator")
        rel_matrix = IntMatrix.from_columns(self.relations, self.n) \
            if self.relations else IntMatrix.zero(self.n, 0)
        u, d, _ = smith_normal_form(rel_matrix)
        self._u = u
        self._diag = [d.data[i][i] for i in range(min(rel_matrix.rows, rel_matrix.cols))]
        self._diag += [0] * (self.n - len(self._diag))
        for a in self.action_matrices:
            if a.rows != self.n or a.cols != self.n:
                raise ArgumentError("action matrix shape mismatch")
            for r in self.relations:
                if not self.is_zero(a.apply(list(r))):
                    raise ArgumentError("action does not preserve the relation lattice")
        if check_commuting_action and self.n:
            for i in range(len(self.action_matrices)):
                for j in range(i + 1, len(self.action_matrices)):
                    ab = self.action_matrices[i] @ self.action_matrices[j]
                    ba = self.action_matrices[j] @ self.action_matrices[i]
                    for col in range(self.n):
                        if not self.is_zero(_vec_sub(ab.column(col), ba.column(col))):
                            raise ArgumentError(
                                "action generators do not commute on the module; "
                                "the action must factor through an abelian group")
        self._inverse_cache: dict[int, IntMatrix] = {}

    # -- canonical coordinates ----------------------------------------------

    def canonical(self, v: Sequence[int]) -> Vector:
        w = self._u.apply(list(v))
        return tuple(x % d if d > 0 else x for x, d in zip(w, self._diag))

    def is_zero(self, v: Sequence[int]) -> bool:
        return all(x == 0 for x in self.canonical(v))

    def structure(self) -> FinAbGroup:
        free = sum(1 for d in self._diag if d == 0)
        return FinAbGroup.from_orders([d for d in self._diag if d > 1], free)

    def zero(self) -> Vector:
        return tuple([0] * self.n)

    def basis_vectors(self) -> list[Vector]:
        return [_unit(self.n, i) for i in range(self.n)]

    def add_canonical(self, a: Vector, b: Vector) -> Vector:
        return tuple((x + y) % d if d > 0 else x + y
                     for x, y, d in zip(a, b, self._diag))

    def element_order(self, v: Sequence[int]) -> int:
        """Order of the element in the quotient; infinite orders are errors."""
        w = self.canonical(v)
        n = 1
        for x, d in zip(w, self._diag):
            if d == 0:
                if x != 0:
                    raise SizeGuardError("infinite", 0, what="element order")
                continue
            if x:
                n = math.lcm(n, d // math.gcd(d, x))
        return n

    # -- action ----------------------------------------------------------------

    def act(self, gen_index: int, v: Sequence[int]) -> Vector:
        return tuple(self.action_matrices[gen_index].apply(list(v)))

    def act_inverse(self, gen_index: int, v: Sequence[int]) -> Vector:
        mat = self._inverse_cache.get(gen_index)
        if mat is None:
            mat = self._matrix_inverse_on_quotient(self.action_matrices[gen_index])
            self._inverse_cache[gen_index] = mat
        return tuple(mat.apply(list(v)))

    def _matrix_inverse_on_quotient(self, m: IntMatrix) -> IntMatrix:
        order = self.structure().order()
        cap = (order or 0) + 2
        acc = m
        for _ in range(cap):
            nxt = acc @ m
            if all(self.is_zero(_vec_sub(nxt.column(j), _unit(self.n, j)))
                   for j in range(self.n)):
                return acc
            acc = nxt
        raise WeakcommError("action matrix has no inverse on the quotient")

    def aug_step(self, vectors: Sequence[Vector]) -> list[Vector]:
        """One multiplication by the augmentation ideal: all v*(q-1)."""
        out: list[Vector] = []
        seen: set[Vector] = set()
        for v in vectors:
            for i in range(len(self.action_matrices)):
                w = _vec_sub(self.act(i, v), v)
                c = self.canonical(w)
                if any(c) and c not in seen:
                    seen.add(c)
                    out.append(w)
        return out

    def aug_levels(self, depth: int) -> list[list[Vector]]:
        """Level t holds generators of V * Aug^t, for t = 0..depth."""
        levels = [self.basis_vectors()]
        for _ in range(depth):
            levels.append(self.aug_step(levels[-1]))
        return levels

    def action_nilpotency_class(self, cap: int) -> int | None:
        """Least s with V * Aug^s = 0, or None if s would exceed cap."""
        level = [v for v in self.basis_vectors() if not self.is_zero(v)]
        if not level:
            return 0
        for s in range(1, cap + 1):
            level = self.aug_step(level)
            if not level:
                return s
        return None

    # -- submodules -------------------------------------------------------------

    def submodule(self, seeds: Sequence[Vector], guard: int = 100_000
                  ) -> set[Vector]:
        """Canonical elements of the submodule generated by the seed vectors.

        Requires the underlying group to be finite.
        """
        if self.structure().free_rank:
            raise SizeGuardError("infinite", guard, what="submodule enumeration")
        gens: list[Vector] = []
        span: set[Vector] = {self.canonical(self.zero())}
        work = [tuple(map(int, s)) for s in seeds]
        while work:
            v = work.pop(0)
            if self.canonical(v) in span:
                continue
            gens.append(v)
            span = self._additive_closure(gens, guard)
            for i in range(len(self.action_matrices)):
                work.append(self.act(i, v))
        return span

    def _additive_closure(self, gens: Sequence[Vector], guard: int) -> set[Vector]:
        zero = self.canonical(self.zero())
        span = {zero}
        frontier = [zero]
        cgens = [self.canonical(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in cgens:
                    y = self.add_canonical(x, g)
                    if y not in span:
                        if len(span) >= guard:
                            raise SizeGuardError(f"> {guard}", guard, what="submodule")
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
        return span

    def subgroup_order_and_exponent(self, elems: set[Vector]) -> tuple[int, int]:
        exp = 1
        for v in elems:
            exp = math.lcm(exp, self.element_order(v))
        return len(elems), exp


# -- builders -------------------------------------------------------------------

def aug_mod_I2(group: PermGroup, acting_labels: Sequence[str] | None = None,
               guard: int | None = None) -> QModule:
    """Augmentation ideal mod squared differences, as a right module.

    Basis: (g - 1) for the non-identity elements g, in enumeration order.
    Relations: the expansions of (g - 1)^2 * h over all g, h.  The right
    multiplication action by the group generators factors through the
    abelianization, which the constructor verifies.
    """
    limit = group.guard if guard is None else guard
    elems = list(group.elements(limit))
    ident = Perm.identity(group.degree)
    basis = [e for e in elems if e != ident]
    index = {e: i for i, e in enumerate(basis)}
    n = len(basis)

    def delta(x: Perm) -> dict[int, int]:
        return {} if x == ident else {index[x]: 1}

    relations: list[Vector] = []
    seen: set[Vector] = set()
    for g in basis:  # (1-1)^2 h = 0 adds nothing, so g runs over the basis
        gg = g * g
        for h in elems:
            acc: dict[int, int] = {}
            for x, c in ((gg * h, 1), (g * h, -2), (h, 1)):
                if x != ident:
                    i = index[x]
                    acc[i] = acc.get(i, 0) + c
            vec = tuple(acc.get(i, 0) for i in range(n))
            if any(vec) and vec not in seen:
                seen.add(vec)
                relations.append(vec)

    matrices = []
    for p in group.generators:
        m = IntMatrix.zero(n, n)
        for i, x in enumerate(basis):
            xp = x * p
            if xp != ident:
                m.data[index[xp]][i] += 1
            if p != ident:
                m.data[index[p]][i] -= 1
        matrices.append(m)
    if acting_labels is None:
        acting_labels = [f"g{i}" for i in range(len(group.generators))]
    labels = [f"d{i}" for i in range(n)]
    return QModule(labels, relations, acting_labels, matrices)


@dataclass
class AbelianSection:
    """An abelian quotient num/den realized with coordinates, plus its
    conjugation action builder."""

    module: QModule
    matrix_of: Callable[[Perm], IntMatrix]
    gen_labels: list[str]


def module_from_abelian_quotient(num: PermGroup, den: PermGroup,
                                 gen_elems: Sequence[Perm],
                                 acting_elems: Sequence[Perm],
                                 acting_labels: Sequence[str],
                                 gen_labels: Sequence[str] | None = None,
                                 guard: int | None = None) -> AbelianSection:
    """Coordinate model of the abelian section num/den with conjugation action.

    The acting elements must normalize both groups; conjugation of the chosen
    generator elements must stay inside num.
    """
    limit = num.guard if guard is None else guard
    quot, project = quotient_realization(num, den)
    if not quot.is_abelian():
        raise ArgumentError("section is not abelian")
    if quot.order() > limit:
        raise SizeGuardError(quot.order(), limit, what="abelian section")
    pgens = [project(g) for g in gen_elems]
    k = len(pgens)
    ident = Perm.identity(quot.degree)
    coords: dict[Perm, Vector] = {ident: tuple([0] * k)}
    relations: list[Vector] = []
    seen_rel: set[Vector] = set()
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            we = coords[e]
            for i, pg in enumerate(pgens):
                f = e * pg
                cand = _vec_add(we, _unit(k, i))
                if f not in coords:
                    coords[f] = cand
                    nxt.append(f)
                else:
                    rel = _vec_sub(cand, coords[f])
                    if any(rel) and rel not in seen_rel:
                        seen_rel.add(rel)
                        relations.append(rel)
        frontier = nxt
    if len(coords) != quot.order():
        raise ArgumentError("chosen generators do not generate the section")

    def matrix_of(t: Perm) -> IntMatrix:
        m = IntMatrix.zero(k, k)
        for i, g in enumerate(gen_elems):
            img = project(g.conjugate(t))
            for r, c in enumerate(coords[img]):
                m.data[r][i] = c
        return m

    if gen_labels is None:
        gen_labels = [f"a{i}" for i in range(k)]
    module = QModule(list(gen_labels), relations, list(acting_labels),
                     [matrix_of(t) for t in acting_elems])
    return AbelianSection(module, matrix_of, list(gen_labels))


def _kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    out = IntMatrix.zero(a.rows * b.rows, a.cols * b.cols)
    for i in range(a.rows):
        for j in range(a.cols):
            if a.data[i][j]:
                for r in range(b.rows):
                    for c in range(b.cols):
                        out.data[i * b.rows + r][j * b.cols + c] = \
                            a.data[i][j] * b.data[r][c]
    return out


def module_M(group: PermGroup, acting_labels: Sequence[str] | None = None,
             guard: int | None = None) -> QModule:
    """Coinvariant tensor square of the derived section.

    With A the maximal abelian quotient of the derived subgroup, this is
    (A (x) A) modulo the antidiagonal conjugation action of the
    abelianization, with the residual action through the first factor.
    """
    limit = group.guard if guard is None else guard
    if acting_labels is None:
        acting_labels = [f"g{i}" for i in range(len(group.generators))]
    derived = group.derived_subgroup()
    second = derived.derived_subgroup()
    section = module_from_abelian_quotient(
        derived, second, derived.generators, group.generators, acting_labels,
        guard=limit)
    k = section.module.n
    lattice = section.module.relations
    # tensor-square generators e_{i,j}; index (i, j) -> i*k + j
    relations: list[Vector] = []
    for lam in lattice:
        for j in range(k):
            vec = [0] * (k * k)
            for r in range(k):
                vec[r * k + j] = lam[r]
            relations.append(tuple(vec))
        for i in range(k):
            vec = [0] * (k * k)
            for c in range(k):
                vec[i * k + c] = lam[c]
            relations.append(tuple(vec))
    identity_k = IntMatrix.identity(k)
    # antidiagonal coinvariants: quotient by x*(q, q^-1) - x per acting generator
    for t in group.generators:
        cq = section.matrix_of(t)
        cq_inv = section.matrix_of(t.inverse())
        tq = _kron(cq, cq_inv)
        for j in range(k * k):
            col = tq.column(j)
            col[j] -= 1
            if any(col):
                relations.append(tuple(col))
    action = [_kron(section.matrix_of(t), identity_k) for t in group.generators]
    labels = [f"t{i}_{j}" for i in range(k) for j in range(k)]
    return QModule(labels, relations, list(acting_labels), action)


def ell_section_module(x, guard: int | None = None) -> AbelianSection:
    """L/L' of a built realization, with the conjugation action of the split
    copy's generators.

    Generators are the letter differences of the non-identity base elements
    in enumeration order, deliberately matching the basis order of
    ``aug_mod_I2`` so the two models can be compared generator-for-generator.
    """
    ident = Perm.identity(x.G.degree)
    base_order = [g for g in x.G.elements() if g != ident]
    gen_elems = [x.ell_images[g] for g in base_order]
    labels = [f"d{i}" for i in range(len(gen_elems))]
    acting_labels = [f"g{i}" for i in range(len(x.x_images))]
    return module_from_abelian_quotient(
        x.L, x.L.derived_subgroup(), gen_elems, x.x_images, acting_labels,
        gen_labels=labels, guard=guard)


def ell_module_consistency(x, guard: int | None = None) -> dict:
    """Compare the augmentation-quotient model with the realization's L/L'.

    Returns invariant factors from three routes: the relation-lattice model,
    the realization section, and a torsion-counting pass on the abelian
    quotient group itself.
    """
    v1 = aug_mod_I2(x.G, guard=guard)
    section = ell_section_module(x, guard=guard)
    v2 = section.module
    from .permgroups import abelian_invariants
    quot, _ = quotient_realization(x.L, x.L.derived_subgroup())
    counted = abelian_invariants(quot)
    return {
        "aug_model_invariants": v1.structure().invariant_factors,
        "realization_invariants": v2.structure().invariant_factors,
        "torsion_count_invariants": counted,
        "matched_generator_agreement": modules_agree_on_matched_generators(v1, v2),
    }


def nil_equation_checks(v: QModule) -> dict:
    """The two vanishing laws of the augmentation action on V = L/L':
    2 V Aug^2 = 0, and V Aug^(k+3) = 0 where k = |V / 2V|."""
    order = v.structure().order()
    if order is None:
        raise SizeGuardError("infinite", 0, what="nil equation check")
    level2 = v.aug_levels(2)[2]
    doubled_ok = all(v.is_zero(tuple(2 * c for c in vec)) for vec in level2)
    k = 1
    for d in v.structure().invariant_factors:
        k *= math.gcd(d, 2)
    level = v.basis_vectors()
    depth_ok = False
    for _ in range(k + 3):
        level = v.aug_step(level)
        if not level:
            depth_ok = True
            break
    return {"two_v_aug2_zero": doubled_ok, "k": k, "v_aug_k3_zero": depth_ok}


def w_structure_checks(x, guard: int = 100_000) -> dict:
    """Falsifiable consequences of the module structure of W.

    Computes N = W * Aug^(3+s) and checks the necessary conditions for
    "N sits inside a subquotient of M": the order of N divides the order of
    M and its exponent divides the exponent of M.  When the derived subgroup
    of the base is perfect the whole action on W must be nilpotent, and when
    M vanishes the action class is forced to be at most 3 + s.
    """
    G = x.G
    v = aug_mod_I2(G, guard=guard)
    s = v.action_nilpotency_class(cap=(v.structure().order() or 0) + 3)
    if s is None:
        raise WeakcommError("action on L/L' did not nilpotize below |V|+3")
    acting_labels = [f"g{i}" for i in range(len(x.x_images))]
    w_gens = [g for g in x.W.generators if not g.is_identity()]
    w_section = module_from_abelian_quotient(
        x.W, PermGroup.trivial(x.X.degree), w_gens, x.x_images, acting_labels,
        guard=guard)
    wmod = w_section.module
    m = module_M(G, guard=guard)
    m_order = m.structure().order()
    m_exponent = m.structure().exponent()
    levels = wmod.aug_levels(3 + s)
    n_sub = wmod.submodule(levels[3 + s], guard=guard)
    n_order, n_exponent = wmod.subgroup_order_and_exponent(n_sub)
    w_class = wmod.action_nilpotency_class(
        cap=(wmod.structure().order() or 0) + 3 + s)
    result = {
        "s": s,
        "W_invariants": wmod.structure().invariant_factors,
        "M_invariants": m.structure().invariant_factors,
        "M_order": m_order,
        "M_exponent": m_exponent,
        "N_order": n_order,
        "N_exponent": n_exponent,
        "N_order_divides_M_order": m_order % n_order == 0 if n_order else False,
        "N_exponent_divides_M_exponent": m_exponent % n_exponent == 0,
        "W_action_class": w_class,
        "W1_order": x.W.intersection(x.L.derived_subgroup()).order(),
    }
    derived = G.derived_subgroup()
    if derived.is_perfect():
        result["perfect_derived"] = True
        result["W_action_nilpotent"] = w_class is not None
    if m_order == 1:
        result["class_bounded_by_3_plus_s"] = w_class is not None and w_class <= 3 + s
    return result


def modules_agree_on_matched_generators(v1: QModule, v2: QModule) -> bool:
    """Same generator count, mutually contained relation lattices, and equal
    action matrices modulo the lattice."""
    if v1.n != v2.n or len(v1.action_matrices) != len(v2.action_matrices):
        return False
    for r in v1.relations:
        if not v2.is_zero(r):
            return False
    for r in v2.relations:
        if not v1.is_zero(r):
            return False
    for a1, a2 in zip(v1.action_matrices, v2.action_matrices):
        for j in range(v1.n):
            if not v1.is_zero(_vec_sub(a1.column(j), a2.column(j))):
                return False
    return True
