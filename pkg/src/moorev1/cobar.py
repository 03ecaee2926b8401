"""Cobar-complex Ext calculator over the four-dimensional quotient
coalgebra on xi1 (xi1^4 = 0), with coefficients in small comodules.

The two comodules of interest are the homology of the two-cell complex
(cells x0, x1) and of its endomorphism algebra (basis 1, alpha, gamma,
alpha*gamma).  The latter is not written down by hand: it is derived from
the cell-pair model x_i y_j with its multiplication rule, and the basis
change is checked for consistency on the way.

Ext^{s,t} is computed directly as cobar cohomology by GF(2) linear algebra
in each bidegree.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .dga import D2Report, DimensionTable
from .gf2linalg import Subspace, rank
from .gf2poly import GF2PolyError

__all__ = [
    "COALGEBRA",
    "QuotientCoalgebra",
    "Comodule",
    "CobarCochain",
    "CobarComplex",
    "trivial_comodule",
    "moore_comodule",
    "endomorphism_comodule",
    "cobar_differential",
    "ext_dimensions",
    "class_identity_check",
    "verify_cobar_d_squared",
]

# a coaction or tensor element of C (x) V is a set of (xi1 power, label) pairs
Tensor = FrozenSet[Tuple[int, str]]


def _xor(pairs: Iterable[Tuple[int, str]]) -> Tensor:
    acc = set()
    for p in pairs:
        if p in acc:
            acc.discard(p)
        else:
            acc.add(p)
    return frozenset(acc)


class QuotientCoalgebra:
    """F_2[xi1]/(xi1^4) with the binomial diagonal, |xi1^i| = i."""

    height = 4

    def basis(self) -> range:
        return range(self.height)

    def delta_full(self, i: int) -> Tuple[Tuple[int, int], ...]:
        if not 0 <= i < self.height:
            raise GF2PolyError(f"xi1^{i} is not a basis element")
        return tuple((j, i - j) for j in range(i + 1) if comb(i, j) % 2)

    def delta_reduced(self, i: int) -> Tuple[Tuple[int, int], ...]:
        return tuple((j, k) for j, k in self.delta_full(i) if j and k)

    def verify(self) -> bool:
        """Exhaustive coassociativity of the full diagonal."""
        for i in self.basis():
            left = _xor(
                (a, b, c)
                for j, c in self.delta_full(i)
                for a, b in self.delta_full(j)
            )
            right = _xor(
                (a, b, c)
                for a, j in self.delta_full(i)
                for b, c in self.delta_full(j)
            )
            if left != right:
                return False
        return True


COALGEBRA = QuotientCoalgebra()


@dataclass(frozen=True)
class Comodule:
    """A finite graded comodule over the xi1 coalgebra, with an optional
    multiplication table (values are sums of basis labels)."""

    name: str
    labels: Tuple[str, ...]
    degree_of: Tuple[int, ...]
    coaction_table: Tuple[Tuple[Tuple[int, str], ...], ...]
    multiplication: Optional[Tuple[Tuple[str, str, Tuple[str, ...]], ...]] = None

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise GF2PolyError(f"{label!r} is not a basis label of {self.name}") from None

    def degree(self, label: str) -> int:
        return self.degree_of[self.index(label)]

    def coact(self, label: str) -> Tensor:
        """The full stored coaction of a basis element."""
        return frozenset(self.coaction_table[self.index(label)])

    def coact_reduced(self, label: str) -> Tensor:
        return frozenset(p for p in self.coact(label) if p[0] != 0)

    def product(self, a: str, b: str) -> FrozenSet[str]:
        if self.multiplication is None:
            raise GF2PolyError(f"{self.name} carries no multiplication")
        for x, y, out in self.multiplication:
            if (x, y) == (a, b):
                return frozenset(out)
        raise GF2PolyError(f"product {a}*{b} missing from the table")

    def verify(self, coalgebra: QuotientCoalgebra = COALGEBRA) -> bool:
        for label in self.labels:
            psi = self.coact(label)
            # counit: the power-0 part is exactly 1 (x) label
            if frozenset(p for p in psi if p[0] == 0) != frozenset({(0, label)}):
                return False
            # homogeneity
            d = self.degree(label)
            if any(i + self.degree(m) != d for i, m in psi):
                return False
            # coassociativity with the full diagonal
            left = _xor((a, b, m) for i, m in psi for a, b in coalgebra.delta_full(i))
            right = _xor((i, j, m2) for i, m in psi for j, m2 in self.coact(m))
            if left != right:
                return False
        if self.multiplication is not None and not self._verify_multiplicative(coalgebra):
            return False
        return True

    def _verify_multiplicative(self, coalgebra: QuotientCoalgebra) -> bool:
        for a in self.labels:
            for b in self.labels:
                lhs = _xor(p for m in self.product(a, b) for p in self.coact(m))
                rhs = set()
                for i, m in self.coact(a):
                    for j, m2 in self.coact(b):
                        if i + j >= coalgebra.height:
                            continue
                        for m3 in self.product(m, m2):
                            p = (i + j, m3)
                            if p in rhs:
                                rhs.discard(p)
                            else:
                                rhs.add(p)
                if lhs != frozenset(rhs):
                    return False
        return True


def trivial_comodule() -> Comodule:
    return Comodule(
        name="trivial",
        labels=("1",),
        degree_of=(0,),
        coaction_table=(((0, "1"),),),
        multiplication=(("1", "1", ("1",)),),
    )


def moore_comodule() -> Comodule:
    """Two cells x0, x1 with xi1 connecting them."""
    return Comodule(
        name="two-cell",
        labels=("x0", "x1"),
        degree_of=(0, 1),
        coaction_table=(
            ((0, "x0"),),
            ((0, "x1"), (1, "x0")),
        ),
    )


# cell-pair model: basis x_i y_j, deg = i + j, and (x_i y_j)(x_k y_l) is
# x_i y_l when j + k = 0 and zero otherwise
_CELLS = (("x0", "y-1"), ("x0", "y0"), ("x1", "y-1"), ("x1", "y0"))
_XDEG = {"x0": 0, "x1": 1}
_YDEG = {"y-1": -1, "y0": 0}


def _cell_coaction(cell: Tuple[str, str]) -> Tensor:
    x, y = cell
    psi_x = {(0, x)} if x == "x0" else {(0, "x1"), (1, "x0")}
    psi_y = {(0, y)} if y == "y-1" else {(0, "y0"), (1, "y-1")}
    return _xor(
        ((i + j, (a, b)) for i, a in psi_x for j, b in psi_y if i + j < COALGEBRA.height)
    )


def endomorphism_comodule() -> Comodule:
    """Four-dimensional endomorphism comodule, derived from the cell-pair
    model and rebased to 1, alpha, gamma, alpha*gamma."""
    # basis change: 1 = x1 y-1 + x0 y0, alpha = x0 y-1, gamma = x1 y0,
    # alpha*gamma = x0 y0
    change: Dict[str, Tensor] = {
        "1": frozenset({(0, ("x1", "y-1")), (0, ("x0", "y0"))}),
        "alpha": frozenset({(0, ("x0", "y-1"))}),
        "gamma": frozenset({(0, ("x1", "y0"))}),
        "alpha*gamma": frozenset({(0, ("x0", "y0"))}),
    }
    back: Dict[Tuple[str, str], FrozenSet[str]] = {
        ("x0", "y-1"): frozenset({"alpha"}),
        ("x0", "y0"): frozenset({"alpha*gamma"}),
        ("x1", "y0"): frozenset({"gamma"}),
        ("x1", "y-1"): frozenset({"1", "alpha*gamma"}),
    }
    labels = ("1", "alpha", "gamma", "alpha*gamma")
    degrees = tuple(
        _XDEG[next(iter(change[l]))[1][0]] + _YDEG[next(iter(change[l]))[1][1]]
        for l in labels
    )
    coactions = []
    for label in labels:
        acc = set()
        for _, cell in change[label]:
            for i, cell2 in _cell_coaction(cell):
                for m in back[cell2]:
                    p = (i, m)
                    if p in acc:
                        acc.discard(p)
                    else:
                        acc.add(p)
        coactions.append(tuple(sorted(acc)))
    com = Comodule(
        name="endomorphism",
        labels=labels,
        degree_of=degrees,
        coaction_table=tuple(coactions),
        multiplication=_endomorphism_products(back),
    )
    # the basis change must make the unit grouplike
    if com.coact("1") != frozenset({(0, "1")}):
        raise GF2PolyError("cell-pair model gives a non-grouplike unit")
    return com


def _cell_product(a: Tuple[str, str], b: Tuple[str, str]) -> Optional[Tuple[str, str]]:
    j = _YDEG[a[1]]
    k = _XDEG[b[0]]
    return (a[0], b[1]) if j + k == 0 else None


def _endomorphism_products(back) -> Tuple[Tuple[str, str, Tuple[str, ...]], ...]:
    change = {
        "1": (("x1", "y-1"), ("x0", "y0")),
        "alpha": (("x0", "y-1"),),
        "gamma": (("x1", "y0"),),
        "alpha*gamma": (("x0", "y0"),),
    }
    table = []
    for a, cells_a in change.items():
        for b, cells_b in change.items():
            acc = set()
            for ca in cells_a:
                for cb in cells_b:
                    cell = _cell_product(ca, cb)
                    if cell is None:
                        continue
                    for m in back[cell]:
                        if m in acc:
                            acc.discard(m)
                        else:
                            acc.add(m)
            table.append((a, b, tuple(sorted(acc))))
    return tuple(table)


# a cochain term is (powers, label): positive xi1 powers in the bar slots
Term = Tuple[Tuple[int, ...], str]


class CobarCochain:
    """A formal GF(2) sum of cobar terms xi1^a1 | ... | xi1^as | m."""

    __slots__ = ("comodule", "terms")

    def __init__(self, comodule: Comodule, terms: Iterable[Term] = ()):
        self.comodule = comodule
        self.terms: FrozenSet[Term] = terms if isinstance(terms, frozenset) else _xor_terms(terms)

    @classmethod
    def basis_element(cls, comodule: Comodule, powers: Sequence[int], label: str) -> "CobarCochain":
        powers = tuple(powers)
        for a in powers:
            if not 1 <= a < COALGEBRA.height:
                raise GF2PolyError(f"bar entry xi1^{a} out of range")
        comodule.index(label)
        return cls(comodule, frozenset({(powers, label)}))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "CobarCochain") -> "CobarCochain":
        if self.comodule is not other.comodule and self.comodule != other.comodule:
            raise GF2PolyError("cochains over different comodules")
        return CobarCochain(self.comodule, self.terms ^ other.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CobarCochain)
            and self.comodule == other.comodule
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.comodule.name, self.terms))

    def bidegree(self) -> Optional[Tuple[int, int]]:
        """(s, t) common to all terms; None for zero; raises when mixed."""
        bds = {
            (len(p), sum(p) + self.comodule.degree(label)) for p, label in self.terms
        }
        if not bds:
            return None
        if len(bds) > 1:
            raise GF2PolyError("cochain is not homogeneous")
        return bds.pop()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        def fmt(term: Term) -> str:
            powers, label = term
            slots = [f"xi1^{a}" if a > 1 else "xi1" for a in powers]
            return "|".join(slots + [label])
        return " + ".join(fmt(t) for t in sorted(self.terms))

    def __repr__(self) -> str:
        return f"CobarCochain({self})"


def _xor_terms(terms: Iterable[Term]) -> FrozenSet[Term]:
    acc = set()
    for t in terms:
        if t in acc:
            acc.discard(t)
        else:
            acc.add(t)
    return frozenset(acc)


def cobar_differential(c: CobarCochain, coalgebra: QuotientCoalgebra = COALGEBRA) -> CobarCochain:
    """Insert the reduced diagonal at every bar slot and the reduced
    coaction at the coefficient slot; all signs vanish over GF(2)."""
    out: List[Term] = []
    com = c.comodule
    for powers, label in c.terms:
        for slot, a in enumerate(powers):
            for j, k in coalgebra.delta_reduced(a):
                out.append((powers[:slot] + (j, k) + powers[slot + 1 :], label))
        for i, m in com.coact_reduced(label):
            out.append((powers + (i,), m))
    return CobarCochain(com, _xor_terms(out))


class CobarComplex:
    """Bidegree-sliced cobar complex of one comodule, with cached bases and
    differential ranks."""

    def __init__(self, comodule: Comodule, coalgebra: QuotientCoalgebra = COALGEBRA):
        self.comodule = comodule
        self.coalgebra = coalgebra
        self._basis_cache: Dict[Tuple[int, int], Tuple[Term, ...]] = {}
        self._rank_cache: Dict[Tuple[int, int], int] = {}

    def basis(self, s: int, t: int) -> Tuple[Term, ...]:
        key = (s, t)
        got = self._basis_cache.get(key)
        if got is not None:
            return got
        out: List[Term] = []
        if s >= 0:
            for li, label in enumerate(self.comodule.labels):
                target = t - self.comodule.degree_of[li]
                out.extend((p, label) for p in _compositions(target, s, self.coalgebra.height - 1))
        basis = tuple(sorted(out, key=lambda term: (term[0], self.comodule.index(term[1]))))
        self._basis_cache[key] = basis
        return basis

    def differential_rank(self, s: int, t: int) -> int:
        key = (s, t)
        got = self._rank_cache.get(key)
        if got is not None:
            return got
        rows = self.matrix(s, t)
        r = rank(rows)
        self._rank_cache[key] = r
        return r

    def matrix(self, s: int, t: int) -> List[int]:
        """Rows (target-indexed bitsets over source columns) of d at (s, t)."""
        source = self.basis(s, t)
        target = self.basis(s + 1, t)
        index = {term: i for i, term in enumerate(target)}
        rows = [0] * len(target)
        for j, term in enumerate(source):
            image = cobar_differential(
                CobarCochain(self.comodule, frozenset({term})), self.coalgebra
            )
            for out_term in image.terms:
                rows[index[out_term]] |= 1 << j
        return rows

    def ext_dim(self, s: int, t: int) -> int:
        if s < 0:
            return 0
        cycles = len(self.basis(s, t)) - self.differential_rank(s, t)
        boundaries = self.differential_rank(s - 1, t) if s > 0 else 0
        return cycles - boundaries


def _compositions(total: int, slots: int, part_max: int) -> List[Tuple[int, ...]]:
    """Ordered tuples of `slots` integers in [1, part_max] summing to total."""
    if slots == 0:
        return [()] if total == 0 else []
    if total < slots or total > slots * part_max:
        return []
    out = []
    for first in range(1, part_max + 1):
        for rest in _compositions(total - first, slots - 1, part_max):
            out.append((first,) + rest)
    return out


def ext_dimensions(
    comodule: Comodule,
    s_max: int,
    t_range: Tuple[int, int],
    coalgebra: QuotientCoalgebra = COALGEBRA,
) -> DimensionTable:
    cx = CobarComplex(comodule, coalgebra)
    rows: Dict[Tuple[int, ...], int] = {}
    for s in range(s_max + 1):
        for t in range(t_range[0], t_range[1] + 1):
            n = cx.ext_dim(s, t)
            if n:
                rows[(s, t)] = n
    return DimensionTable(
        ("s", "t"),
        rows,
        {"comodule": comodule.name, "s_max": str(s_max), "t_range": f"{t_range[0]}..{t_range[1]}"},
    )


def class_identity_check(comodule: Comodule, c: CobarCochain) -> str:
    """Decide the fate of a homogeneous cochain: 'not-a-cycle',
    'zero-in-cohomology' (a coboundary, or zero), or 'nonzero'."""
    if c.is_zero():
        return "zero-in-cohomology"
    if not cobar_differential(c).is_zero():
        return "not-a-cycle"
    s, t = c.bidegree()
    cx = CobarComplex(comodule)
    basis = cx.basis(s, t)
    index = {term: i for i, term in enumerate(basis)}
    v = 0
    for term in c.terms:
        v |= 1 << index[term]
    if s == 0:
        return "nonzero"
    columns = []
    for term in cx.basis(s - 1, t):
        img = cobar_differential(CobarCochain(comodule, frozenset({term})))
        col = 0
        for out_term in img.terms:
            col |= 1 << index[out_term]
        columns.append(col)
    return "zero-in-cohomology" if v in Subspace(columns) else "nonzero"


def verify_cobar_d_squared(
    comodule: Comodule, s_max: int, t_range: Tuple[int, int]
) -> D2Report:
    cx = CobarComplex(comodule)
    checked = 0
    failures = []
    for s in range(s_max + 1):
        for t in range(t_range[0], t_range[1] + 1):
            for term in cx.basis(s, t):
                c = CobarCochain(comodule, frozenset({term}))
                twice = cobar_differential(cobar_differential(c))
                checked += 1
                if not twice.is_zero():
                    failures.append((term, twice))
    return D2Report(checked=checked, failures=failures)
