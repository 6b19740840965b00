"""Free-group words over a two-sorted alphabet.

An alphabet consists of generator symbols, each a base name with an optional
bar flag (``a`` vs ``a~`` in text form).  Words are immutable, freely reduced
sequences of signed symbols.  On top of the plain word algebra this module
provides the structural letter maps of the weak-commutativity double: the
copy swap ``bar``, the two coordinate projections ``pi`` / ``pibar``, and the
three-coordinate embedding map ``rho`` defined letter-by-letter by

    g  ->  (g, g, 1)        g~  ->  (1, g, g).

The token ``l_<name>`` in text input is derived notation for the letter
difference ``<name>^-1 * <name>~`` and is expanded eagerly at parse time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import AlphabetError, ArgumentError, ParseError


@dataclass(frozen=True)
class GenSymbol:
    """One signed letter: base name, bar flag, and sign (+1 or -1).

    Symbols compare by (name, bar); the sign only flips under inversion.
    """

    name: str
    bar: bool = False
    sign: int = 1

    def __post_init__(self):
        if not self.name or not re.fullmatch(r"[A-Za-z0-9_]+", self.name):
            raise ArgumentError(f"invalid generator name {self.name!r}")
        if self.sign not in (1, -1):
            raise ArgumentError(f"symbol sign must be +1 or -1, got {self.sign}")

    @property
    def generator(self) -> "GenSymbol":
        return GenSymbol(self.name, self.bar, 1)

    def inverse(self) -> "GenSymbol":
        return GenSymbol(self.name, self.bar, -self.sign)

    def same_generator(self, other: "GenSymbol") -> bool:
        return self.name == other.name and self.bar == other.bar

    def __str__(self) -> str:
        s = self.name + ("~" if self.bar else "")
        return s + ("^-1" if self.sign < 0 else "")


def _reduce(letters: Iterable[GenSymbol]) -> tuple[GenSymbol, ...]:
    stack: list[GenSymbol] = []
    for sym in letters:
        if stack and stack[-1].same_generator(sym) and stack[-1].sign == -sym.sign:
            stack.pop()
        else:
            stack.append(sym)
    return tuple(stack)


class Word:
    """A freely reduced word.  The empty word is the identity."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[GenSymbol] = ()):
        object.__setattr__(self, "letters", _reduce(letters))

    def __setattr__(self, *a):  # immutability
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[GenSymbol]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return Word()
        base = self if n > 0 else self.inverse()
        return Word(base.letters * abs(n))

    def inverse(self) -> "Word":
        return Word(sym.inverse() for sym in reversed(self.letters))

    def conjugate(self, by: "Word") -> "Word":
        """self^by = by^-1 * self * by."""
        return by.inverse() * self * by

    def is_identity(self) -> bool:
        return not self.letters

    def cyclically_reduced(self) -> "Word":
        letters = list(self.letters)
        while len(letters) >= 2 and letters[0].same_generator(letters[-1]) \
                and letters[0].sign == -letters[-1].sign:
            letters = letters[1:-1]
        return Word(letters)

    def generators_used(self) -> set[GenSymbol]:
        return {sym.generator for sym in self.letters}

    def exponent_sum(self, gen: GenSymbol) -> int:
        g = gen.generator
        return sum(sym.sign for sym in self.letters if sym.generator == g)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


def free_reduce(letters: Sequence[GenSymbol],
                alphabet: Sequence[GenSymbol] | None = None) -> Word:
    """Freely reduce a raw symbol sequence.

    When an alphabet is given, every symbol must be drawn from it.
    """
    if alphabet is not None:
        allowed = {s.generator for s in alphabet}
        for sym in letters:
            if sym.generator not in allowed:
                raise AlphabetError(f"symbol {sym} not in declared alphabet")
    return Word(letters)


def gen(name: str, bar: bool = False) -> Word:
    return Word([GenSymbol(name, bar)])


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u^-1 v^-1 u v."""
    return u.inverse() * v.inverse() * u * v


def left_normed(ws: Sequence[Word]) -> Word:
    """[[w1, w2], w3], ... folded left."""
    if not ws:
        raise ArgumentError("left_normed needs at least one word")
    acc = ws[0]
    for w in ws[1:]:
        acc = commutator(acc, w)
    return acc


def engel_word(x: Word, y: Word, n: int) -> Word:
    """The n-th Engel word: [x, y, y, ..., y] with n copies of y."""
    if n < 1:
        raise ArgumentError(f"Engel index must be >= 1, got {n}")
    acc = commutator(x, y)
    for _ in range(n - 1):
        acc = commutator(acc, y)
    return acc


def ell(name: str) -> Word:
    """The letter difference l_g = g^-1 * g~."""
    return Word([GenSymbol(name, False, -1), GenSymbol(name, True, 1)])


# -- structural maps of the double ------------------------------------------

def bar_word(w: Word) -> Word:
    """Swap the two copies of the alphabet."""
    return Word(GenSymbol(s.name, not s.bar, s.sign) for s in w)


def pi_word(w: Word) -> Word:
    """Send both g and g~ to g."""
    return Word(GenSymbol(s.name, False, s.sign) for s in w)


def pibar_word(w: Word) -> Word:
    """Kill unbarred letters; barred letters map to their unbarred names."""
    return Word(GenSymbol(s.name, False, s.sign) for s in w if s.bar)


def rho_word(w: Word) -> tuple[Word, Word, Word]:
    """Letter-by-letter image in the triple product: g -> (g,g,1), g~ -> (1,g,g)."""
    first: list[GenSymbol] = []
    second: list[GenSymbol] = []
    third: list[GenSymbol] = []
    for s in w:
        plain = GenSymbol(s.name, False, s.sign)
        if s.bar:
            second.append(plain)
            third.append(plain)
        else:
            first.append(plain)
            second.append(plain)
    return Word(first), Word(second), Word(third)


def structural_maps(w: Word) -> dict[str, object]:
    return {
        "bar": bar_word(w),
        "pi": pi_word(w),
        "pibar": pibar_word(w),
        "rho": rho_word(w),
    }


# -- text form ---------------------------------------------------------------
#
# word     := factor*                     (juxtaposition; '*' optional)
# factor   := atom ('^' integer)?
# atom     := NAME '~'? | '[' word (',' word)+ ']' | '(' word ')' | '1'
#
# Commutator brackets with more than two entries are left-normed.

_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z0-9_]+)|(?P<op>[~^*\[\](),])|(?P<int>-\d+))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        if self.pos >= len(self.text):
            return None, self.pos
        m = _TOKEN_RE.match(self.text, self.pos)
        if not m or m.end() == m.start():
            stripped = self.text[self.pos:].lstrip()
            if not stripped:
                return None, len(self.text)
            raise ParseError(f"unexpected character {stripped[0]!r}", self.pos)
        return m.group().strip(), m.end()

    def next(self):
        tok, end = self.peek()
        self.pos = end
        return tok


def _expand_symbol(name: str, bar: bool, alphabet: set[tuple[str, bool]] | None,
                   pos: int) -> list[GenSymbol]:
    if alphabet is None or (name, bar) in alphabet:
        return [GenSymbol(name, bar)]
    if not bar and name.startswith("l_") and (name[2:], False) in alphabet \
            and (name[2:], True) in alphabet:
        base = name[2:]
        return [GenSymbol(base, False, -1), GenSymbol(base, True, 1)]
    raise ParseError(f"undeclared generator {name + ('~' if bar else '')!r}", pos)


def _parse_atom(toks: _Tokens, alphabet) -> Word:
    pos = toks.pos
    tok = toks.next()
    if tok is None:
        raise ParseError("unexpected end of word", pos)
    if tok == "(":
        w = _parse_word(toks, alphabet, stop={")"})
        if toks.next() != ")":
            raise ParseError("expected ')'", toks.pos)
        return w
    if tok == "[":
        parts = [_parse_word(toks, alphabet, stop={",", "]"})]
        while True:
            sep = toks.next()
            if sep == "]":
                break
            if sep != ",":
                raise ParseError("expected ',' or ']'", toks.pos)
            parts.append(_parse_word(toks, alphabet, stop={",", "]"}))
        if len(parts) < 2:
            raise ParseError("commutator needs at least two entries", pos)
        return left_normed(parts)
    if tok == "1":
        return Word()
    if re.fullmatch(r"[A-Za-z0-9_]+", tok):
        bar = False
        nxt, end = toks.peek()
        if nxt == "~":
            bar = True
            toks.pos = end
        return Word(_expand_symbol(tok, bar, alphabet, pos))
    raise ParseError(f"unexpected token {tok!r}", pos)


def _parse_word(toks: _Tokens, alphabet, stop: set[str]) -> Word:
    acc = Word()
    while True:
        tok, end = toks.peek()
        if tok is None or tok in stop:
            return acc
        if tok == "*":
            toks.pos = end
            continue
        factor = _parse_atom(toks, alphabet)
        tok, end = toks.peek()
        if tok == "^":
            toks.pos = end
            exp_tok = toks.next()
            if exp_tok is None or not re.fullmatch(r"-?\d+", exp_tok):
                raise ParseError("expected integer exponent after '^'", toks.pos)
            factor = factor ** int(exp_tok)
        acc = acc * factor


def parse_word(text: str, alphabet: Sequence[GenSymbol] | None = None) -> Word:
    """Parse the text form of a word.

    `alphabet` is a sequence of (unsigned) generator symbols; when given,
    undeclared names are an error and ``l_<name>`` expands to the letter
    difference.  Without it any alphanumeric name is accepted literally.
    """
    alpha = None
    if alphabet is not None:
        alpha = {(s.name, s.bar) for s in alphabet}
    toks = _Tokens(text)
    w = _parse_word(toks, alpha, stop=set())
    tok, _ = toks.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok!r}", toks.pos)
    return w


def format_word(w: Word) -> str:
    """Canonical text form: runs collapsed to powers, '*'-separated."""
    if not len(w):
        return "1"
    parts: list[str] = []
    letters = list(w)
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        run = j - i
        base = letters[i].name + ("~" if letters[i].bar else "")
        exp = run * letters[i].sign
        parts.append(base if exp == 1 else f"{base}^{exp}")
        i = j
    return "*".join(parts)
