"""Exact multigraded polynomial arithmetic over GF(2).

A polynomial is a finite set of monomials: every nonzero coefficient is 1
and addition is symmetric difference of term sets, so arithmetic is exact
by construction.  Generators live in a fixed Alphabet.  A generator may be
invertible (Laurent exponents), nilpotent of square zero, or restricted to
exponent multiples of a stride (used for pages that only contain even
powers of the invertible generator).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Set, Tuple


class GF2PolyError(Exception):
    """Base error for alphabet and polynomial problems."""


class AlphabetMismatchError(GF2PolyError):
    """Raised when combining polynomials over different alphabets."""


class InvalidWindowError(GF2PolyError):
    """Raised for truncation windows with an empty range."""


class ParseError(GF2PolyError):
    """Syntax error in polynomial text, with the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownGeneratorError(ParseError):
    """A syntactically valid generator name that is not in the alphabet."""


class Multidegree(tuple):
    """Tridegree (s, t, u) with componentwise arithmetic."""

    __slots__ = ()

    def __new__(cls, s: int, t: int, u: int):
        return tuple.__new__(cls, (s, t, u))

    @property
    def s(self) -> int:
        return self[0]

    @property
    def t(self) -> int:
        return self[1]

    @property
    def u(self) -> int:
        return self[2]

    def __add__(self, other):
        return Multidegree(self[0] + other[0], self[1] + other[1], self[2] + other[2])

    def __sub__(self, other):
        return Multidegree(self[0] - other[0], self[1] - other[1], self[2] - other[2])

    def scaled(self, k: int) -> "Multidegree":
        return Multidegree(self[0] * k, self[1] * k, self[2] * k)

    def __repr__(self):
        return f"Multidegree(s={self[0]}, t={self[1]}, u={self[2]})"


_H_NAME = re.compile(r"^h\((\d+),(\d+)\)$")
_X_NAME = re.compile(r"^x\((\d+)\)$")


def _name_rank(name: str) -> Tuple[int, int, int]:
    """Canonical generator order: v1 < alpha < alphap < h(1,0) < h(1,1) < h(2,1) < ... < x(1) < x(2) < ... < xi1."""
    if name == "v1":
        return (0, 0, 0)
    if name == "alpha":
        return (1, 0, 0)
    if name == "alphap":
        return (2, 0, 0)
    m = _H_NAME.match(name)
    if m:
        return (3, int(m.group(1)), int(m.group(2)))
    m = _X_NAME.match(name)
    if m:
        return (4, int(m.group(1)), 0)
    if name == "xi1":
        return (5, 0, 0)
    raise GF2PolyError(f"generator name {name!r} is not in the supported grammar")


@dataclass(frozen=True)
class Generator:
    """A graded generator.  stride restricts exponents to multiples of it."""

    name: str
    degree: Multidegree
    invertible: bool = False
    nilpotent_square: bool = False
    stride: int = 1

    def __post_init__(self):
        _name_rank(self.name)  # validates the name shape
        if self.invertible and self.nilpotent_square:
            raise GF2PolyError(f"{self.name}: invertible generators cannot square to zero")
        if self.stride < 1:
            raise GF2PolyError(f"{self.name}: stride must be positive")
        if self.stride > 1 and not self.invertible:
            raise GF2PolyError(f"{self.name}: stride only applies to the invertible generator")


class Alphabet:
    """An ordered set of generators, kept in the canonical generator order."""

    def __init__(self, generators: Iterable[Generator]):
        gens = sorted(generators, key=lambda g: _name_rank(g.name))
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise GF2PolyError("duplicate generator names in alphabet")
        invertible = [g for g in gens if g.invertible]
        if len(invertible) > 1:
            raise GF2PolyError("at most one invertible generator is supported")
        if invertible and invertible[0].name != "v1":
            raise GF2PolyError("only v1 may be invertible")
        self.generators: Tuple[Generator, ...] = tuple(gens)
        self._index: Dict[str, int] = {g.name: i for i, g in enumerate(gens)}
        self.v1_index: Optional[int] = self._index.get("v1") if invertible else None

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    def __getitem__(self, i: int) -> Generator:
        return self.generators[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise GF2PolyError(f"generator {name!r} not in alphabet") from None

    def generator(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    @property
    def v1(self) -> Optional[Generator]:
        return None if self.v1_index is None else self.generators[self.v1_index]

    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def max_u_compensation(self, s_cap: int) -> int:
        """Largest total u-degree the non-invertible part of a monomial can carry
        when its total s-degree is at most s_cap."""
        total = 0
        ratio = 0
        for g in self.generators:
            if g.invertible or g.degree.u <= 0:
                continue
            if g.degree.s == 0:
                # bounded by nilpotence; unbounded otherwise
                if not g.nilpotent_square:
                    raise GF2PolyError(f"{g.name}: unbounded u-degree in window enumeration")
                total += g.degree.u
            else:
                ratio = max(ratio, -(-g.degree.u // g.degree.s))  # ceil(u/s)
        return total + ratio * max(s_cap, 0)


# A monomial is a tuple of (generator index, exponent) pairs, sorted by
# index, with all exponents nonzero.
Monomial = Tuple[Tuple[int, int], ...]

UNIT: Monomial = ()


def mono_degree(alphabet: Alphabet, mono: Monomial) -> Multidegree:
    s = t = u = 0
    for gi, e in mono:
        d = alphabet[gi].degree
        s += d[0] * e
        t += d[1] * e
        u += d[2] * e
    return Multidegree(s, t, u)


def mono_mul(alphabet: Alphabet, a: Monomial, b: Monomial) -> Optional[Monomial]:
    """Product of two monomials, or None when a square of a nilpotent appears."""
    if not a:
        return b
    if not b:
        return a
    exps: Dict[int, int] = dict(a)
    for gi, e in b:
        exps[gi] = exps.get(gi, 0) + e
    out = []
    for gi in sorted(exps):
        e = exps[gi]
        if e == 0:
            continue
        g = alphabet[gi]
        if g.nilpotent_square and e > 1:
            return None
        if e < 0 and not g.invertible:
            raise GF2PolyError(f"negative exponent on {g.name}")
        out.append((gi, e))
    return tuple(out)


def mono_divides(divisor: Monomial, mono: Monomial) -> bool:
    """True when divisor's exponents are all covered by mono (positive exponents only)."""
    exps = dict(mono)
    for gi, e in divisor:
        if exps.get(gi, 0) < e:
            return False
    return True


def mono_exponent(mono: Monomial, gi: int) -> int:
    for i, e in mono:
        if i == gi:
            return e
    return 0


def mono_sort_key(alphabet: Alphabet, mono: Monomial) -> Tuple[int, ...]:
    key = [0] * len(alphabet)
    for gi, e in mono:
        key[gi] = e
    return tuple(key)


def mono_str(alphabet: Alphabet, mono: Monomial) -> str:
    if not mono:
        return "1"
    parts = []
    for gi, e in mono:
        name = alphabet[gi].name
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class Polynomial:
    """A GF(2) polynomial: a frozenset of monomials over one alphabet."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Iterable[Monomial] = ()):
        self.alphabet = alphabet
        if isinstance(terms, frozenset):
            self.terms = terms
        else:
            # duplicate terms cancel in characteristic 2
            acc: Set[Monomial] = set()
            for m in terms:
                if m in acc:
                    acc.discard(m)
                else:
                    acc.add(m)
            self.terms = frozenset(acc)

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "Polynomial":
        return cls(alphabet, frozenset())

    @classmethod
    def one(cls, alphabet: Alphabet) -> "Polynomial":
        return cls(alphabet, frozenset((UNIT,)))

    @classmethod
    def gen(cls, alphabet: Alphabet, name: str, exp: int = 1) -> "Polynomial":
        gi = alphabet.index(name)
        g = alphabet[gi]
        if exp == 0:
            return cls.one(alphabet)
        if exp < 0 and not g.invertible:
            raise GF2PolyError(f"negative exponent on {name}")
        if g.invertible and exp % g.stride:
            raise GF2PolyError(f"{name}: exponent {exp} is not a multiple of its stride {g.stride}")
        if g.nilpotent_square and exp > 1:
            return cls.zero(alphabet)
        return cls(alphabet, frozenset((((gi, exp),),)))

    @classmethod
    def monomial(cls, alphabet: Alphabet, mono: Monomial) -> "Polynomial":
        return cls(alphabet, frozenset((mono,)))

    def _check_alphabet(self, other: "Polynomial"):
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError("polynomials over different alphabets")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.alphabet == other.alphabet
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.terms))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_alphabet(other)
        return Polynomial(self.alphabet, self.terms ^ other.terms)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_alphabet(other)
        acc: Set[Monomial] = set()
        for a in self.terms:
            for b in other.terms:
                m = mono_mul(self.alphabet, a, b)
                if m is None:
                    continue
                if m in acc:
                    acc.discard(m)
                else:
                    acc.add(m)
        return Polynomial(self.alphabet, frozenset(acc))

    def mul_monomial(self, mono: Monomial) -> "Polynomial":
        acc: Set[Monomial] = set()
        for a in self.terms:
            m = mono_mul(self.alphabet, a, mono)
            if m is None:
                continue
            if m in acc:
                acc.discard(m)
            else:
                acc.add(m)
        return Polynomial(self.alphabet, frozenset(acc))

    def monomials_sorted(self) -> List[Monomial]:
        return sorted(self.terms, key=lambda m: mono_sort_key(self.alphabet, m))

    def is_homogeneous(self) -> bool:
        degs = {mono_degree(self.alphabet, m) for m in self.terms}
        return len(degs) <= 1

    def multidegree(self) -> Optional[Multidegree]:
        """Common multidegree of all terms; None for the zero polynomial."""
        degs = {mono_degree(self.alphabet, m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise GF2PolyError("polynomial is not homogeneous")
        return degs.pop()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return "+".join(mono_str(self.alphabet, m) for m in self.monomials_sorted())

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    @classmethod
    def parse(cls, alphabet: Alphabet, text: str) -> "Polynomial":
        return _parse(alphabet, text)


_TOKEN_RE = re.compile(
    r"v1|alphap|alpha|xi1|h\(\s*\d+\s*,\s*\d+\s*\)|x\(\s*\d+\s*\)|\^|\*|\+|-?\d+"
)


def _tokenize(text: str) -> List[Tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tok = re.sub(r"\s", "", m.group(0))
        tokens.append((tok, pos))
        pos = m.end()
    return tokens


def _parse(alphabet: Alphabet, text: str) -> Polynomial:
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text", 0)
    terms: Set[Monomial] = set()
    i = 0

    def parse_term(i: int) -> Tuple[Optional[Monomial], int]:
        exps: Dict[int, int] = {}
        dead = False
        while True:
            if i >= len(tokens):
                raise ParseError("expected a factor", len(text))
            tok, pos = tokens[i]
            i += 1
            if tok == "1":
                pass
            elif tok == "0":
                dead = True
            elif tok in ("^", "*", "+") or re.fullmatch(r"-?\d+", tok):
                raise ParseError(f"expected a factor, found {tok!r}", pos)
            else:
                try:
                    gi = alphabet.index(tok)
                except GF2PolyError:
                    raise UnknownGeneratorError(f"unknown generator {tok!r}", pos) from None
                exp = 1
                if i < len(tokens) and tokens[i][0] == "^":
                    i += 1
                    if i >= len(tokens) or not re.fullmatch(r"-?\d+", tokens[i][0]):
                        at = tokens[i][1] if i < len(tokens) else len(text)
                        raise ParseError("expected an integer exponent", at)
                    exp = int(tokens[i][0])
                    i += 1
                exps[gi] = exps.get(gi, 0) + exp
            if i < len(tokens) and tokens[i][0] == "*":
                i += 1
                continue
            break
        if dead:
            return None, i
        mono = []
        for gi in sorted(exps):
            e = exps[gi]
            if e == 0:
                continue
            g = alphabet[gi]
            if e < 0 and not g.invertible:
                raise ParseError(f"negative exponent on {g.name}", 0)
            if g.invertible and e % g.stride:
                raise ParseError(f"{g.name}: exponent {e} is not a multiple of its stride {g.stride}", 0)
            if g.nilpotent_square and e > 1:
                return None, i  # square of a nilpotent: the whole term is zero
            mono.append((gi, e))
        return tuple(mono), i

    while True:
        mono, i = parse_term(i)
        if mono is not None:
            if mono in terms:
                terms.discard(mono)
            else:
                terms.add(mono)
        if i < len(tokens):
            tok, pos = tokens[i]
            if tok != "+":
                raise ParseError(f"expected '+', found {tok!r}", pos)
            i += 1
            continue
        break
    return Polynomial(alphabet, frozenset(terms))


@dataclass(frozen=True)
class TruncationWindow:
    """Finite truncation of an infinite graded algebra.

    Results are exact inside the window; the trusted region for homology is
    the window shrunk by trusted_margin differential-shifts on each side.
    """

    max_generator_index: int
    v1_exponent_range: Tuple[int, int]
    s_range: Tuple[int, int]
    t_range: Tuple[int, int]
    u_range: Tuple[int, int]
    trusted_margin: int = 1

    def __post_init__(self):
        for name in ("v1_exponent_range", "s_range", "t_range", "u_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise InvalidWindowError(f"empty {name}: ({lo}, {hi})")
        if self.trusted_margin < 0:
            raise InvalidWindowError("trusted_margin must be nonnegative")

    def contains(self, d: Multidegree) -> bool:
        return (
            self.s_range[0] <= d[0] <= self.s_range[1]
            and self.t_range[0] <= d[1] <= self.t_range[1]
            and self.u_range[0] <= d[2] <= self.u_range[1]
        )


def default_window(
    t_max: int = 64,
    s_max: int = 12,
    v1_min: int = -16,
    v1_max: int = 16,
    trusted_margin: int = 1,
) -> TruncationWindow:
    """Window used throughout: u matches the v1 exponent range and the
    internal degree reaches down to the most negative in-window monomial."""
    t_min = 2 * v1_min - 1 if v1_min < 0 else -1
    return TruncationWindow(
        max_generator_index=sufficient_h_index(t_max, v1_min),
        v1_exponent_range=(v1_min, v1_max),
        s_range=(0, s_max),
        t_range=(t_min, t_max),
        u_range=(v1_min, v1_max),
        trusted_margin=trusted_margin,
    )


def sufficient_h_index(t_max: int, v1_min: int) -> int:
    """Largest n for which h(n,1) can appear in a monomial with internal
    degree at most t_max, given the most negative v1 exponent allowed."""
    cap = t_max - 2 * min(v1_min, 0) + 1
    n = 1
    while 2 ** (n + 2) - 2 <= cap:
        n += 1
    return n


def sufficient_x_index(t_max: int, v1_min: int) -> int:
    """Largest n for which x(n) (internal degree 2^(n+2)) fits under t_max."""
    cap = t_max - 2 * min(v1_min, 0) + 1
    n = 0
    while 2 ** (n + 3) <= cap:
        n += 1
    return n


def _solve_v1_exponent(v1deg: Multidegree, rem: Multidegree) -> Optional[int]:
    """The unique j with j*v1deg == rem, or None."""
    for c in range(3):
        if v1deg[c]:
            if rem[c] % v1deg[c]:
                return None
            j = rem[c] // v1deg[c]
            if all(j * v1deg[k] == rem[k] for k in range(3)):
                return j
            return None
    return 0 if rem == Multidegree(0, 0, 0) else None


def enumerate_basis(
    alphabet: Alphabet, window: TruncationWindow, degree: Multidegree
) -> List[Monomial]:
    """All monomials of the given multidegree inside the window, in the
    canonical order.  Exact: nothing of that degree is missed as long as the
    alphabet satisfies the generator sufficiency bound for the window."""
    v1_lo, v1_hi = window.v1_exponent_range
    if v1_lo > v1_hi:
        raise InvalidWindowError("empty v1 exponent range")
    v1 = alphabet.v1
    others = [(i, g) for i, g in enumerate(alphabet.generators) if not g.invertible]
    # largest-degree generators first prunes best
    others.sort(key=lambda ig: (-ig[1].degree.t, ig[0]))
    # slack from negative internal degrees (nilpotent generators only)
    neg_slack = [0] * (len(others) + 1)
    for k in range(len(others) - 1, -1, -1):
        g = others[k][1]
        neg_slack[k] = neg_slack[k + 1] + max(0, -g.degree.t)
    if v1 is not None:
        t_budget_hi = degree.t - v1.degree.t * v1_lo
        t_budget_lo = degree.t - v1.degree.t * v1_hi
    else:
        t_budget_hi = degree.t
        t_budget_lo = degree.t
    out: List[Monomial] = []

    def recurse(k: int, acc: List[Tuple[int, int]], s: int, t: int, u: int):
        if s > degree.s:
            return
        if t - neg_slack[k] > t_budget_hi:
            return
        if k == len(others):
            rem = Multidegree(degree.s - s, degree.t - t, degree.u - u)
            if v1 is None:
                if rem == Multidegree(0, 0, 0):
                    out.append(tuple(sorted(acc)))
                return
            j = _solve_v1_exponent(v1.degree, rem)
            if j is None or j % v1.stride or not (v1_lo <= j <= v1_hi):
                return
            mono = list(acc)
            if j != 0:
                mono.append((alphabet.v1_index, j))
            out.append(tuple(sorted(mono)))
            return
        gi, g = others[k]
        e_max = None
        if g.nilpotent_square:
            e_max = 1
        if g.degree.s > 0:
            cap = (degree.s - s) // g.degree.s
            e_max = cap if e_max is None else min(e_max, cap)
        if g.degree.t > 0:
            cap = (t_budget_hi + neg_slack[k + 1] - t) // g.degree.t
            e_max = cap if e_max is None else min(e_max, cap)
        if e_max is None:
            raise GF2PolyError(f"{g.name}: cannot bound exponent during enumeration")
        e = 0
        while e <= e_max:
            if e == 0:
                recurse(k + 1, acc, s, t, u)
            else:
                acc.append((gi, e))
                recurse(k + 1, acc, s + g.degree.s * e, t + g.degree.t * e, u + g.degree.u * e)
                acc.pop()
            e += 1

    # note: without v1 the t budget is exact, extra pruning via t_budget_lo
    # is unnecessary because all remaining degrees are nonnegative
    del t_budget_lo
    recurse(0, [], 0, 0, 0)
    out.sort(key=lambda m: mono_sort_key(alphabet, m))
    return out


class WindowBasis:
    """Monomial bases of every degree in a window, with completeness flags.

    A degree is complete when no monomial of that exact multidegree was
    excluded by the v1 exponent range; degrees outside the window ranges are
    never complete since nothing was enumerated there.
    """

    def __init__(
        self,
        window: TruncationWindow,
        buckets: Dict[Multidegree, List[Monomial]],
        truncated: Set[Multidegree],
        alphabet: Alphabet,
    ):
        self.window = window
        self.alphabet = alphabet
        self._buckets: Dict[Multidegree, Tuple[Monomial, ...]] = {
            d: tuple(sorted(monos, key=lambda m: mono_sort_key(alphabet, m)))
            for d, monos in buckets.items()
        }
        self._truncated = truncated

    def basis(self, d: Multidegree) -> Tuple[Monomial, ...]:
        return self._buckets.get(d, ())

    def complete(self, d: Multidegree) -> bool:
        # below s = 0 the whole algebra vanishes, no truncation can hide anything
        if d[0] < 0 and all(g.degree.s >= 0 for g in self.alphabet):
            return True
        return self.window.contains(d) and d not in self._truncated

    def degrees(self) -> List[Multidegree]:
        return sorted(self._buckets)

    def filtered(self, keep: Callable[[Monomial], bool]) -> "WindowBasis":
        kept = {}
        for d, monos in self._buckets.items():
            sub = [m for m in monos if keep(m)]
            if sub:
                kept[d] = sub
        return WindowBasis(self.window, kept, set(self._truncated), self.alphabet)


def enumerate_window(alphabet: Alphabet, window: TruncationWindow) -> WindowBasis:
    """Enumerate every in-window monomial at once, bucketed by multidegree.

    The v1 exponent is iterated over everything consistent with the u range,
    so a degree whose basis got clipped by the v1 exponent range is flagged
    as truncated rather than silently reported short.
    """
    v1_lo, v1_hi = window.v1_exponent_range
    if v1_lo > v1_hi:
        raise InvalidWindowError("empty v1 exponent range")
    s_lo, s_hi = window.s_range
    t_lo, t_hi = window.t_range
    u_lo, u_hi = window.u_range
    v1 = alphabet.v1
    others = [(i, g) for i, g in enumerate(alphabet.generators) if not g.invertible]
    others.sort(key=lambda ig: (-ig[1].degree.t, ig[0]))
    neg_slack = [0] * (len(others) + 1)
    for k in range(len(others) - 1, -1, -1):
        g = others[k][1]
        neg_slack[k] = neg_slack[k + 1] + max(0, -g.degree.t)
    if v1 is not None:
        if v1.degree.u <= 0:
            raise GF2PolyError("v1 must carry positive u-degree")
        j_floor = min(v1_lo, u_lo - alphabet.max_u_compensation(s_hi))
        t_part_hi = t_hi - v1.degree.t * j_floor if j_floor < 0 else t_hi
        u_part_hi = u_hi - v1.degree.u * j_floor if j_floor < 0 else u_hi
    else:
        t_part_hi = t_hi
        u_part_hi = u_hi
    buckets: Dict[Multidegree, List[Monomial]] = {}
    truncated: Set[Multidegree] = set()

    def emit(mono: Monomial, d: Multidegree):
        buckets.setdefault(d, []).append(mono)

    def leaf(acc: List[Tuple[int, int]], s: int, t: int, u: int):
        if v1 is None:
            if s_lo <= s <= s_hi and t_lo <= t <= t_hi and u_lo <= u <= u_hi:
                emit(tuple(sorted(acc)), Multidegree(s, t, u))
            return
        if not (s_lo <= s <= s_hi):
            return
        vu = v1.degree.u
        j_min = -((u - u_lo + vu - 1) // vu)  # smallest j with u + j*vu >= u_lo
        j_max = (u_hi - u) // vu
        for j in range(j_min, j_max + 1):
            if j % v1.stride:
                continue
            tt = t + v1.degree.t * j
            if not (t_lo <= tt <= t_hi):
                continue
            d = Multidegree(s, tt, u + vu * j)
            if v1_lo <= j <= v1_hi:
                if j == 0:
                    emit(tuple(sorted(acc)), d)
                else:
                    emit(tuple(sorted(acc + [(alphabet.v1_index, j)])), d)
            else:
                truncated.add(d)

    def recurse(k: int, acc: List[Tuple[int, int]], s: int, t: int, u: int):
        if s > s_hi or u > u_part_hi or t - neg_slack[k] > t_part_hi:
            return
        if k == len(others):
            leaf(acc, s, t, u)
            return
        gi, g = others[k]
        e_max = None
        if g.nilpotent_square:
            e_max = 1
        if g.degree.s > 0:
            cap = (s_hi - s) // g.degree.s
            e_max = cap if e_max is None else min(e_max, cap)
        if g.degree.t > 0:
            cap = (t_part_hi + neg_slack[k + 1] - t) // g.degree.t
            e_max = cap if e_max is None else min(e_max, cap)
        if g.degree.u > 0:
            cap = (u_part_hi - u) // g.degree.u
            e_max = cap if e_max is None else min(e_max, cap)
        if e_max is None:
            raise GF2PolyError(f"{g.name}: cannot bound exponent during enumeration")
        e = 0
        while e <= e_max:
            if e == 0:
                recurse(k + 1, acc, s, t, u)
            else:
                acc.append((gi, e))
                recurse(k + 1, acc, s + g.degree.s * e, t + g.degree.t * e, u + g.degree.u * e)
                acc.pop()
            e += 1

    recurse(0, [], 0, 0, 0)
    return WindowBasis(window, buckets, truncated, alphabet)
