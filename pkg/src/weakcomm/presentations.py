"""Finite group presentations and the weak-commutativity double.

A presentation is an ordered generator list plus freely-and-cyclically
reduced relator words.  The double of ``<X | R>`` adds a barred copy of every
generator and, per witness word w, the relator ``[w, bar(w)]``.  With the
``AllElements`` policy (one witness per element of a finite group, obtained
from a coset enumeration) the double presents the weak-commutativity group
exactly; with ``LengthBound(k)`` it presents a group that may be a proper
pre-image, which callers must surface.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

from .errors import ArgumentError, ParseError
from .intlinalg import FinAbGroup, IntMatrix, cokernel
from .words import (GenSymbol, Word, bar_word, commutator, format_word,
                    parse_word)


@dataclass(frozen=True)
class AllElements:
    """One witness word per non-identity group element (finite groups only)."""

    def label(self) -> str:
        return "all"


@dataclass(frozen=True)
class LengthBound:
    """Witness words: all freely reduced words of length <= k."""

    k: int

    def label(self) -> str:
        return f"len:{self.k}"


WitnessPolicy = AllElements | LengthBound


class Presentation:
    """``< generators | relators >`` with validated, cyclically reduced relators."""

    def __init__(self, generators: Sequence[GenSymbol], relators: Sequence[Word]):
        gens = tuple(g.generator for g in generators)
        seen = set()
        for g in gens:
            key = (g.name, g.bar)
            if key in seen:
                raise ArgumentError(f"duplicate generator {g}")
            seen.add(key)
        declared = {(g.name, g.bar) for g in gens}
        reduced = []
        for r in relators:
            for sym in r:
                if (sym.name, sym.bar) not in declared:
                    raise ArgumentError(f"relator uses undeclared generator {sym}")
            r = r.cyclically_reduced()
            if not r.is_identity():
                reduced.append(r)
        self.generators = gens
        self.relators = tuple(reduced)

    def alphabet(self) -> tuple[GenSymbol, ...]:
        return self.generators

    def gen_index(self) -> dict[tuple[str, bool], int]:
        return {(g.name, g.bar): i for i, g in enumerate(self.generators)}

    def parse(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def __eq__(self, other) -> bool:
        return isinstance(other, Presentation) and \
            self.generators == other.generators and self.relators == other.relators

    def __repr__(self) -> str:
        return f"Presentation({format_presentation(self)!r})"

    def __str__(self) -> str:
        return format_presentation(self)


def parse_presentation(text: str) -> Presentation:
    """Parse ``< gens | relators >``; whitespace-insensitive."""
    stripped = text.strip()
    if not stripped.startswith("<"):
        raise ParseError("presentation must start with '<'", 0)
    if not stripped.endswith(">"):
        raise ParseError("presentation must end with '>'", len(text) - 1)
    body = stripped[1:-1]
    if "|" not in body:
        raise ParseError("presentation needs a '|' separator", text.index("<") + 1)
    gens_part, _, rel_part = body.partition("|")
    generators: list[GenSymbol] = []
    for piece in gens_part.split(","):
        piece = piece.strip()
        if not piece:
            if gens_part.strip():
                raise ParseError("empty generator name", text.index(","))
            continue
        m = re.fullmatch(r"([A-Za-z0-9_]+)(~?)", piece)
        if not m:
            raise ParseError(f"bad generator name {piece!r}", text.index(piece))
        generators.append(GenSymbol(m.group(1), bar=bool(m.group(2))))
    if not generators:
        raise ParseError("presentation needs at least one generator", 1)
    relators = []
    for piece in _split_top_level(rel_part):
        piece = piece.strip()
        if piece:
            relators.append(parse_word(piece, generators))
    return Presentation(generators, relators)


def _split_top_level(text: str) -> list[str]:
    """Split on commas not nested inside brackets."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def format_presentation(p: Presentation) -> str:
    gens = ", ".join(g.name + ("~" if g.bar else "") for g in p.generators)
    rels = ", ".join(format_word(r) for r in p.relators)
    return f"< {gens} | {rels} >"


def presentation_to_json(p: Presentation, meta: dict | None = None) -> str:
    doc = {
        "schema_version": 1,
        "generators": [g.name + ("~" if g.bar else "") for g in p.generators],
        "relators": [format_word(r) for r in p.relators],
        "meta": meta or {},
    }
    return json.dumps(doc, sort_keys=True, indent=2)


def presentation_from_json(text: str) -> tuple[Presentation, dict]:
    doc = json.loads(text)
    gens = []
    for name in doc["generators"]:
        bar = name.endswith("~")
        gens.append(GenSymbol(name.rstrip("~"), bar=bar))
    relators = [parse_word(r, gens) for r in doc["relators"]]
    return Presentation(gens, relators), doc.get("meta", {})


# -- the double ---------------------------------------------------------------

def _dedup_inverse_pairs(words: list[Word]) -> list[Word]:
    # [w, bar w] and [w^-1, bar(w)^-1] are consequences of each other
    kept: list[Word] = []
    seen: set[Word] = set()
    for w in words:
        if w in seen or w.inverse() in seen:
            continue
        seen.add(w)
        kept.append(w)
    return kept


def _length_bound_words(p: Presentation, k: int) -> list[Word]:
    letters = [Word([g]) for g in p.generators] + \
              [Word([g.inverse()]) for g in p.generators]
    out: list[Word] = []
    frontier = [Word()]
    for _ in range(k):
        nxt = []
        for w in frontier:
            for letter in letters:
                v = w * letter
                if len(v) == len(w) + 1:
                    nxt.append(v)
        out.extend(nxt)
        frontier = nxt
    return _dedup_inverse_pairs(out)


def witness_words(p: Presentation, policy: WitnessPolicy,
                  max_cosets: int = 10 ** 6) -> list[Word]:
    """The words w whose relator [w, bar w] enters the double."""
    if isinstance(policy, LengthBound):
        if policy.k < 1:
            raise ArgumentError("length bound must be >= 1")
        return _length_bound_words(p, policy.k)
    from .enumerator import enumerate_cosets
    table = enumerate_cosets(p, [], max_cosets=max_cosets)
    reps = table.coset_words(p)
    nontrivial = [w for w in reps if not w.is_identity()]
    # deduplicate g vs g^-1 at the element level
    word_of = {table.trace_word(0, w): w for w in nontrivial}
    kept, taken = [], set()
    for w in nontrivial:
        c = table.trace_word(0, w)
        cinv = table.trace_word(0, w.inverse())
        if c in taken or cinv in taken:
            continue
        taken.add(c)
        kept.append(word_of[c])
    return kept


def sidki_double(p: Presentation, policy: WitnessPolicy,
                 max_cosets: int = 10 ** 6) -> Presentation:
    """Double the presentation: generators X u barred X, relators R u bar(R)
    u {[w, bar w] : w in witness set}."""
    if any(g.bar for g in p.generators):
        raise ArgumentError("presentation already contains barred generators")
    gens = list(p.generators) + [GenSymbol(g.name, bar=True) for g in p.generators]
    relators = list(p.relators)
    relators += [bar_word(r) for r in p.relators]
    for w in witness_words(p, policy, max_cosets=max_cosets):
        relators.append(commutator(w, bar_word(w)))
    return Presentation(gens, relators)


# -- abelian invariants and products ------------------------------------------

def exponent_matrix(p: Presentation) -> IntMatrix:
    """Generators as rows, relators as columns; entries are exponent sums."""
    idx = p.gen_index()
    m = IntMatrix.zero(len(p.generators), len(p.relators))
    for j, r in enumerate(p.relators):
        for sym in r:
            m.data[idx[(sym.name, sym.bar)]][j] += sym.sign
    return m


def abelianization(p: Presentation) -> FinAbGroup:
    return cokernel(exponent_matrix(p))


def _renamed(p: Presentation, suffix: str) -> Presentation:
    mapping = {g.name: g.name + suffix for g in p.generators}

    def rename(w: Word) -> Word:
        return Word(GenSymbol(mapping[s.name], s.bar, s.sign) for s in w)

    gens = [GenSymbol(mapping[g.name], g.bar) for g in p.generators]
    return Presentation(gens, [rename(r) for r in p.relators])


def _disjointify(p1: Presentation, p2: Presentation) -> tuple[Presentation, Presentation]:
    names1 = {g.name for g in p1.generators}
    names2 = {g.name for g in p2.generators}
    if names1 & names2:
        return _renamed(p1, "_1"), _renamed(p2, "_2")
    return p1, p2


def free_product(p1: Presentation, p2: Presentation) -> Presentation:
    p1, p2 = _disjointify(p1, p2)
    return Presentation(list(p1.generators) + list(p2.generators),
                        list(p1.relators) + list(p2.relators))


def direct_product(p1: Presentation, p2: Presentation) -> Presentation:
    p1, p2 = _disjointify(p1, p2)
    relators = list(p1.relators) + list(p2.relators)
    for g in p1.generators:
        for h in p2.generators:
            relators.append(commutator(Word([g]), Word([h])))
    return Presentation(list(p1.generators) + list(p2.generators), relators)
