"""End-to-end construction and verification of the weak-commutativity double.

``build`` enumerates a finite base group G and its double X, realizes both
regularly, extracts the structural subgroups

    D = kernel of X -> G x barG        (the commutator subgroup [G, barG])
    L = kernel of X -> G               (generated by the letter differences)
    W = D n L = kernel of rho          (abelian, central in DL)

and machine-checks every structural identity the construction promises.  A
failing check aborts with a witness: it would indicate an implementation
bug, not a mathematical surprise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random
from typing import Sequence

from .enumerator import CosetTable, enumerate_cosets, perm_realization, signed_letters
from .errors import ArgumentError, CheckFailure
from .intlinalg import FinAbGroup
from .permgroups import (GroupHom, Perm, PermGroup, block_perm, commutator,
                         quotient_realization)
from .presentations import AllElements, Presentation, abelianization, sidki_double
from .words import Word, bar_word, pi_word
from . import zqmodules


@dataclass
class XRealization:
    presentation: Presentation
    double: Presentation
    base_table: CosetTable
    table: CosetTable
    G: PermGroup
    X: PermGroup
    x_images: list[Perm]
    xbar_images: list[Perm]
    G_elements: list[Perm]
    G_words: list[Word]
    ell_images: dict[Perm, Perm]
    D: PermGroup
    L: PermGroup
    W: PermGroup
    DL: PermGroup
    G_split: PermGroup
    G3: PermGroup
    im_rho: PermGroup
    rho: GroupHom
    pi: GroupHom
    Q: FinAbGroup
    checks: list[dict] = field(default_factory=list)

    def check(self, name: str, ok: bool, witness=None) -> None:
        self.checks.append({"name": name, "pass": bool(ok),
                            **({"witness": str(witness)} if witness is not None and not ok else {})})

    def failed_checks(self) -> list[dict]:
        return [c for c in self.checks if not c["pass"]]

    def orders(self) -> dict[str, int]:
        return {
            "G": self.G.order(), "X": self.X.order(), "D": self.D.order(),
            "L": self.L.order(), "W": self.W.order(), "DL": self.DL.order(),
            "im_rho": self.im_rho.order(),
        }


def _triple(parts: Sequence[Perm | None], degree: int) -> Perm:
    ident = Perm.identity(degree)
    return block_perm([p if p is not None else ident for p in parts])


def build(pres: Presentation, max_cosets: int = 10 ** 6, guard: int = 100_000,
          strategy: str = "hlt", rng_seed: int = 7, raise_on_failure: bool = True
          ) -> XRealization:
    """Build and verify the double of a finite presented group."""
    if any(g.bar for g in pres.generators):
        raise ArgumentError("base presentation must not contain barred generators")

    base_table = enumerate_cosets(pres, [], max_cosets=max_cosets, strategy=strategy)
    G = perm_realization(base_table, guard=guard)
    G_words = base_table.coset_words(pres)
    G_elements = [base_table.word_image(pres, w) for w in G_words]

    double = sidki_double(pres, AllElements(), max_cosets=max_cosets)
    table = enumerate_cosets(double, [], max_cosets=max_cosets, strategy=strategy)
    X = perm_realization(table, guard=guard)

    ngens = len(pres.generators)
    x_images = list(X.generators[:ngens])
    xbar_images = list(X.generators[ngens:])

    # pi: X -> G sending both copies of a generator to the generator
    pi = GroupHom(X, G, list(G.generators) + list(G.generators),
                  relators=[signed_letters(double, r) for r in double.relators])

    # rho: X -> G x G x G with g -> (g, g, 1) and barg -> (1, g, g)
    gdeg = G.degree
    triple_gens = []
    for slot in range(3):
        for p in G.generators:
            parts: list[Perm | None] = [None, None, None]
            parts[slot] = p
            triple_gens.append(_triple(parts, gdeg))
    G3 = PermGroup(3 * gdeg, triple_gens, guard=max(guard, G.order() ** 3 + 1),
                   known_order=G.order() ** 3)
    rho_images = [_triple([p, p, None], gdeg) for p in G.generators] + \
                 [_triple([None, p, p], gdeg) for p in G.generators]
    rho = GroupHom(X, G3, rho_images,
                   relators=[signed_letters(double, r) for r in double.relators])

    # letter differences, indexed by the base-group element
    ell_images: dict[Perm, Perm] = {}
    for g_elem, w in zip(G_elements, G_words):
        u = table.word_image(double, w)
        v = table.word_image(double, bar_word(w))
        ell_images[g_elem] = u.inverse() * v

    L_sub = X.subgroup(list(ell_images.values()))
    L_ker = pi.kernel()
    D_gens = [commutator(a, b) for a in x_images for b in xbar_images]
    D_nc = X.normal_closure(D_gens)
    # D as a kernel, independently: X -> G x barG
    two_gens = [block_perm([p, Perm.identity(gdeg)]) for p in G.generators] + \
               [block_perm([Perm.identity(gdeg), p]) for p in G.generators]
    GG = PermGroup(2 * gdeg, two_gens, guard=max(guard, G.order() ** 2 + 1),
                   known_order=G.order() ** 2)
    pi_gg = GroupHom(X, GG, two_gens,
                     relators=[signed_letters(double, r) for r in double.relators])
    D_ker = pi_gg.kernel()

    W = D_ker.intersection(L_ker)
    DL = X.subgroup(list(D_ker.generators) + list(L_ker.generators))
    G_split = X.subgroup(x_images)
    im_rho = rho.image()
    Q = abelianization(pres)

    x = XRealization(
        presentation=pres, double=double, base_table=base_table, table=table,
        G=G, X=X, x_images=x_images, xbar_images=xbar_images,
        G_elements=G_elements, G_words=G_words, ell_images=ell_images,
        D=D_ker, L=L_ker, W=W, DL=DL, G_split=G_split, G3=G3, im_rho=im_rho,
        rho=rho, pi=pi, Q=Q,
    )

    # --- structural checks -------------------------------------------------
    x.check("L_generated_by_letter_differences",
            L_sub.order() == L_ker.order() and
            all(g in L_ker.elements() for g in L_sub.generators))
    L_nc = X.normal_closure(list(ell_images.values()))
    x.check("L_subgroup_equals_normal_closure", L_nc.order() == L_sub.order())
    x.check("D_normal_closure_equals_kernel",
            D_nc.order() == D_ker.order() and
            all(g in D_ker.elements() for g in D_nc.generators))

    x.check("D_commutes_with_L", D_ker.centralizes(L_ker))
    rng = Random(rng_seed)
    bad_pair = None
    for _ in range(32):
        d = D_ker.random_element(rng)
        l = L_ker.random_element(rng)
        if d * l != l * d:
            bad_pair = (d, l)
            break
    x.check("D_commutes_with_L_random_elements", bad_pair is None, bad_pair)

    ker_rho = rho.kernel()
    x.check("W_equals_kernel_of_rho",
            W.order() == ker_rho.order() and
            all(g in ker_rho.elements() for g in W.generators))
    x.check("W_is_abelian", W.is_abelian())
    w_elems = list(W.elements())
    x.check("W_central_in_DL",
            all(w * g == g * w for w in w_elems for g in DL.generators))

    x.check("splitting_intersection_trivial",
            L_ker.intersection(G_split).order() == 1)
    x.check("splitting_orders", L_ker.order() * G_split.order() == X.order())
    x.check("split_copy_isomorphic_order", G_split.order() == G.order())

    # image of rho is the fiber product over the abelianization
    constraint = _constraint_subgroup_elements(G)
    im_elems = set(im_rho.elements())
    x.check("im_rho_equals_constraint_subgroup", im_elems == constraint,
            witness=f"|im_rho|={len(im_elems)}, |constraint|={len(constraint)}")
    q_order = Q.order()
    x.check("index_of_im_rho_is_Q",
            q_order is not None and G.order() ** 3 == im_rho.order() * q_order)
    x.check("order_product", X.order() == W.order() * im_rho.order())

    ell_ok, ell_witness = _ell_identity(x, samples=None if G.order() <= 100 else 200,
                                        rng=rng)
    x.check("letter_difference_identity", ell_ok, ell_witness)

    if G.is_perfect():
        center_x = set(X.center().elements())
        x.check("W_central_for_perfect_base",
                all(w in center_x for w in w_elems))

    if raise_on_failure:
        failed = x.failed_checks()
        if failed:
            raise CheckFailure(failed[0]["name"], failed[0].get("witness"))
    return x


def _constraint_subgroup_elements(G: PermGroup) -> set[Perm]:
    """{(g1, g2, g3) : g1 g2^-1 g3 in G'} built directly inside G x G x G."""
    derived = set(G.derived_subgroup().elements())
    elems = list(G.elements())
    out = set()
    for g1 in elems:
        for g2 in elems:
            h = g1 * g2.inverse()
            for g3 in elems:
                if h * g3 in derived:
                    out.add(block_perm([g1, g2, g3]))
    return out


def _ell_identity(x: XRealization, samples: int | None, rng: Random
                  ) -> tuple[bool, tuple | None]:
    """Both conjugation identities for letter differences:
    l_u^x = l_{ux} l_x^-1   and   l_u^{bar x} = l_x^-1 l_{ux}."""
    table, double = x.table, x.double
    pairs = []
    if samples is None:
        pairs = [(i, j) for i in range(len(x.G_elements))
                 for j in range(len(x.G_elements))]
    else:
        n = len(x.G_elements)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(samples)]
    for i, j in pairs:
        u, xg = x.G_elements[i], x.G_elements[j]
        wu, wx = x.G_words[i], x.G_words[j]
        lu = x.ell_images[u]
        lx = x.ell_images[xg]
        lux = x.ell_images[u * xg]
        img_x = table.word_image(double, wx)
        img_xbar = table.word_image(double, bar_word(wx))
        if lu.conjugate(img_x) != lux * lx.inverse():
            return False, ("unbarred", str(wu), str(wx))
        if lu.conjugate(img_xbar) != lx.inverse() * lux:
            return False, ("barred", str(wu), str(wx))
    return True, None


def check_im_rho(x: XRealization) -> bool:
    """Re-run the independent image-of-rho comparison."""
    return set(x.im_rho.elements()) == _constraint_subgroup_elements(x.G)


def ell_identity_check(x: XRealization, samples: int | None = None,
                       rng_seed: int = 7) -> bool:
    ok, _ = _ell_identity(x, samples, Random(rng_seed))
    return ok


def nilpotence_report(x: XRealization, raise_on_failure: bool = True) -> dict:
    """Nilpotency classes of the base group and the double.

    Finite nilpotent bases must give nilpotent doubles; that implication is
    asserted.  Nothing is asserted for non-nilpotent bases.
    """
    class_g = x.G.nilpotency_class()
    class_x = x.X.nilpotency_class()
    report = {"class_G": class_g, "class_X": class_x}
    if class_g is not None and class_x is None and raise_on_failure:
        raise CheckFailure("nilpotence_preserved", report)
    return report


def engel_certificate(x: XRealization, guard: int | None = None,
                      raise_on_failure: bool = True) -> dict:
    """Engel data (n, d, s) and the verified bound m = n + d + s + 3.

    n: minimal Engel class of the base group (must exist: the base must be
       nilpotent).
    d: nilpotency class of the metabelianization G/G''.
    s: nilpotency class of the action on the letter-difference section,
       computed on the augmentation-quotient model.
    The verdict is the exhaustive m-Engel check on the double.
    """
    G, X = x.G, x.X
    class_g = G.nilpotency_class()
    if class_g is None:
        raise ArgumentError("base group is not nilpotent, so not an Engel group")
    n = G.minimal_engel_class(cap=max(1, class_g), guard=guard)
    if n is None:
        raise ArgumentError("base group is not Engel within its nilpotency class")
    second_derived = G.derived_subgroup().derived_subgroup()
    metab, _ = quotient_realization(G, second_derived)
    d = metab.nilpotency_class()
    if d is None:
        raise CheckFailure("metabelianization_nilpotent", "G/G'' not nilpotent")
    v = zqmodules.aug_mod_I2(G)
    v_order = v.structure().order()
    s = v.action_nilpotency_class(cap=(v_order or 0) + 3)
    if s is None:
        raise CheckFailure("action_nilpotency_terminates",
                           "no s within |V|+3: implementation error")
    m = n + d + s + 3
    verdict = X.is_n_engel(m, guard=guard)
    minimal_x = X.minimal_engel_class(cap=m, guard=guard)
    report = {"n": n, "d": d, "s": s, "m": m, "verdict": verdict,
              "minimal_engel_class_of_double": minimal_x,
              "bound_gap": None if minimal_x is None else m - minimal_x}
    if raise_on_failure and not verdict:
        raise CheckFailure("engel_bound", report)
    return report


def perfect_base_report(pres: Presentation, max_cosets: int = 2_000_000,
                        strategy: str = "hlt") -> dict:
    """Large-instance checks for a perfect base group.

    Instead of enumerating the double regularly (its order can be huge),
    enumerate over the split copy of the base: the cosets biject with the
    letter-difference kernel L, so the index stays manageable.  The product
    of the coset action with the triple-coordinate map is faithful (the core
    of the split copy meets the kernel of the triple map trivially), which
    lets the centrality of W be verified honestly:

    * the triple map is surjective (its image has order |G|^3), and
    * every element of W = ker rho commutes with all generators.
    """
    base_table = enumerate_cosets(pres, [], max_cosets=max_cosets,
                                  strategy=strategy)
    G = perm_realization(base_table, guard=10 ** 7)
    if G.derived_subgroup().order() != G.order():
        raise ArgumentError("base group is not perfect")
    double = sidki_double(pres, AllElements(), max_cosets=max_cosets)
    split_gens = [Word([g]) for g in pres.generators]
    table = enumerate_cosets(double, split_gens, max_cosets=max_cosets,
                             strategy=strategy)
    index = table.n_cosets                      # = |L|
    x_order = index * G.order()

    gdeg = G.degree
    ident = Perm.identity(gdeg)
    rho_of_letter: dict[tuple[str, bool, int], tuple[Perm, Perm, Perm]] = {}
    for g, p in zip(pres.generators, G.generators):
        rho_of_letter[(g.name, False, 1)] = (p, p, ident)
        rho_of_letter[(g.name, False, -1)] = (p.inverse(), p.inverse(), ident)
        rho_of_letter[(g.name, True, 1)] = (ident, p, p)
        rho_of_letter[(g.name, True, -1)] = (ident, p.inverse(), p.inverse())

    rho_images = [_triple([p, p, None], gdeg) for p in G.generators] + \
                 [_triple([None, p, p], gdeg) for p in G.generators]
    im_rho = PermGroup(3 * gdeg, rho_images, guard=2, known_order=None)
    im_rho_order = im_rho.order()               # stabilizer chain
    im_rho_full = im_rho_order == G.order() ** 3
    w_order, rem = divmod(x_order, im_rho_order)
    if rem:
        raise CheckFailure("order_product", (x_order, im_rho_order))

    # triple images and split-copy projections, coset by coset
    words = table.coset_words(double)
    pi_idx = {(g.name, b): i for i, g in enumerate(pres.generators)
              for b in (False, True)}
    w_members: list[Word] = []
    for c, w in enumerate(words):
        r1 = r2 = r3 = ident
        p = ident
        for sym in w:
            a, b, cc = rho_of_letter[(sym.name, sym.bar, sym.sign)]
            r1, r2, r3 = r1 * a, r2 * b, r3 * cc
            gp = G.generators[pi_idx[(sym.name, sym.bar)]]
            p = p * (gp if sym.sign > 0 else gp.inverse())
        if r1 == p and r2 == p and r3 == ident:
            # the L-part of this coset lies in the kernel of the triple map
            w_members.append(pi_word(w).inverse() * w)
    if len(w_members) != w_order:
        raise CheckFailure("W_member_count", (len(w_members), w_order))

    def coset_perm(word: Word) -> Perm:
        return Perm(table.trace_word(c, word) for c in range(index))

    gen_perms = [coset_perm(Word([g])) for g in double.generators]
    central = True
    for lw in w_members:
        lp = coset_perm(lw)
        if any(lp * gp != gp * lp for gp in gen_perms):
            central = False
            break
    return {
        "group_order": G.order(),
        "index_of_split_copy": index,
        "X_order": x_order,
        "im_rho_order": im_rho_order,
        "im_rho_is_full_triple_product": im_rho_full,
        "W_order": w_order,
        "W_central": central,
    }


def verification_report(x: XRealization, include_engel: bool = False,
                        guard: int | None = None) -> dict:
    report = {
        "group": str(x.presentation),
        "double": str(x.double),
        "orders": x.orders(),
        "abelianization": str(x.Q),
        "checks": x.checks,
        "classes": nilpotence_report(x, raise_on_failure=False),
    }
    if include_engel:
        try:
            report["engel"] = engel_certificate(x, guard=guard,
                                                raise_on_failure=False)
        except ArgumentError as exc:
            report["engel"] = {"error": str(exc)}
    return report
