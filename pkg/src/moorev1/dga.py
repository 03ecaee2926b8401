"""Graded-commutative GF(2) algebras with differentials, and their homology
over a truncation window.

A PagePresentation is an alphabet, a list of monomial relations, and a
differential given on generators and extended as a derivation.  The
invertible generator may carry a stride: its differential is then recorded
on the stride power (d of v1^stride), which is what a page containing only
even Laurent powers needs.

Homology is computed degreewise.  A degree is trusted when its basis and
the bases one differential-shift to either side are complete in the window,
so every reported dimension is exact rather than an artifact of truncation.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .gf2linalg import Subspace, column_space_basis, kernel_basis, subquotient_basis
from .gf2poly import (
    GF2PolyError,
    Monomial,
    Multidegree,
    Polynomial,
    TruncationWindow,
    WindowBasis,
    enumerate_window,
    mono_degree,
    mono_divides,
    mono_str,
)

__all__ = [
    "PagePresentation",
    "PresentationPage",
    "ComputedPage",
    "DimensionTable",
    "D2Report",
    "MissingDifferentialError",
    "UntrustedDegreeError",
    "WindowOverflowError",
    "TruncationWindow",
    "apply_derivation",
    "differential_matrix",
    "homology_page",
    "verify_d_squared",
]


class MissingDifferentialError(GF2PolyError):
    """The differential of a generator is needed but was never specified."""


class UntrustedDegreeError(GF2PolyError):
    """A dimension was requested outside the trusted region of a window."""


class WindowOverflowError(GF2PolyError):
    """A differential left the window, so the truncated answer is incomplete."""


class PagePresentation:
    """A presented page: polynomial algebra, monomial relations, differential.

    relations lists monomials equal to zero; a monomial of the quotient basis
    is one not divisible by any of them.  differentials maps generator names
    to their images (explicit zero allowed; a missing entry means unknown and
    raises when actually needed).
    """

    def __init__(
        self,
        alphabet: Alphabet,
        degree_shift: Multidegree,
        differentials: Dict[str, Polynomial],
        relations: Sequence[Monomial] = (),
        name: str = "",
        conditional: bool = False,
        validate: bool = True,
    ):
        self.alphabet = alphabet
        self.degree_shift = degree_shift
        self.relations: Tuple[Monomial, ...] = tuple(relations)
        self.name = name
        self.conditional = conditional
        self.differentials: Dict[str, Polynomial] = {
            k: self._reduce_raw(v) for k, v in differentials.items()
        }
        self._dval_cache: Dict[Tuple[int, int], Polynomial] = {}
        if validate:
            self._validate()

    def _validate(self):
        for name, val in self.differentials.items():
            g = self.alphabet.generator(name)
            if val.alphabet != self.alphabet:
                raise GF2PolyError(f"d({name}) lives over a different alphabet")
            if val.is_zero():
                continue
            expected = g.degree.scaled(g.stride) + self.degree_shift
            if val.multidegree() != expected:
                raise GF2PolyError(
                    f"{self.name or 'page'}: d({name}) has degree {val.multidegree()}, expected {expected}"
                )
        for rel in self.relations:
            for gi, e in rel:
                g = self.alphabet[gi]
                if e < 1 or g.invertible:
                    raise GF2PolyError(f"relation {mono_str(self.alphabet, rel)} is not a valid monomial relation")
            # the ideal must be closed under d, when d is known on the factors
            try:
                image = self.apply_monomial(rel)
            except MissingDifferentialError:
                continue
            if not image.is_zero():
                raise GF2PolyError(
                    f"{self.name or 'page'}: d does not preserve the relation {mono_str(self.alphabet, rel)}"
                )

    def _reduce_raw(self, poly: Polynomial) -> Polynomial:
        return Polynomial(
            poly.alphabet,
            frozenset(m for m in poly.terms if self.is_reduced_monomial(m)),
        )

    def is_reduced_monomial(self, mono: Monomial) -> bool:
        return not any(mono_divides(rel, mono) for rel in self.relations)

    def reduce(self, poly: Polynomial) -> Polynomial:
        if poly.alphabet != self.alphabet:
            raise GF2PolyError("polynomial over a different alphabet")
        return self._reduce_raw(poly)

    def derivation_value(self, gi: int, e: int) -> Polynomial:
        """d(g^e) alone, by the stride Leibniz rule over GF(2)."""
        key = (gi, e)
        cached = self._dval_cache.get(key)
        if cached is not None:
            return cached
        g = self.alphabet[gi]
        stride = g.stride
        if e % stride:
            raise GF2PolyError(f"{g.name}: exponent {e} breaks its stride {stride}")
        if (e // stride) % 2 == 0:
            out = Polynomial.zero(self.alphabet)
        else:
            val = self.differentials.get(g.name)
            if val is None:
                raise MissingDifferentialError(f"d({g.name}) was never specified")
            out = val if e == stride else val.mul_monomial(((gi, e - stride),))
        self._dval_cache[key] = out
        return out

    def apply_monomial(self, mono: Monomial) -> Polynomial:
        total = Polynomial.zero(self.alphabet)
        for pos, (gi, e) in enumerate(mono):
            dv = self.derivation_value(gi, e)
            if dv.is_zero():
                continue
            rest = mono[:pos] + mono[pos + 1 :]
            total = total + dv.mul_monomial(rest)
        return self._reduce_raw(total)

    def apply(self, poly: Polynomial) -> Polynomial:
        if poly.alphabet != self.alphabet:
            raise GF2PolyError("polynomial over a different alphabet")
        total = Polynomial.zero(self.alphabet)
        for m in poly.terms:
            total = total + self.apply_monomial(m)
        return total

    def basis(self, window: TruncationWindow) -> WindowBasis:
        return enumerate_window(self.alphabet, window).filtered(self.is_reduced_monomial)


def apply_derivation(
    pres: PagePresentation, poly: Polynomial, window: Optional[TruncationWindow] = None
) -> Polynomial:
    """The differential of poly.  With a window, raise if any output term
    cannot be represented inside it; without one the result is symbolic."""
    out = pres.apply(poly)
    if window is not None:
        v1i = pres.alphabet.v1_index
        lo, hi = window.v1_exponent_range
        for m in out.terms:
            d = mono_degree(pres.alphabet, m)
            if not window.contains(d):
                raise WindowOverflowError(
                    f"term {mono_str(pres.alphabet, m)} of degree {tuple(d)} leaves the window"
                )
            if v1i is not None:
                for gi, e in m:
                    if gi == v1i and not (lo <= e <= hi):
                        raise WindowOverflowError(
                            f"term {mono_str(pres.alphabet, m)} leaves the v1 exponent range"
                        )
    return out


@dataclass
class D2Report:
    checked: int
    failures: List[Tuple[Monomial, Polynomial]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_d_squared(
    pres: PagePresentation, window: TruncationWindow, diff_fn: Optional[Callable[[Monomial], Polynomial]] = None
) -> D2Report:
    """Check d(d(m)) = 0 for every reduced basis monomial in the window.

    The second application is symbolic, so nothing is lost when d(m) pokes
    past the window edge.
    """
    fn = diff_fn or pres.apply_monomial
    wb = pres.basis(window)
    checked = 0
    failures: List[Tuple[Monomial, Polynomial]] = []
    for d in wb.degrees():
        for m in wb.basis(d):
            try:
                once = fn(m)
            except MissingDifferentialError:
                continue
            twice = Polynomial.zero(pres.alphabet)
            bad = False
            for term in once.terms:
                try:
                    twice = twice + fn(term)
                except MissingDifferentialError:
                    bad = True
                    break
            if bad:
                continue
            checked += 1
            if not twice.is_zero():
                failures.append((m, twice))
    return D2Report(checked=checked, failures=failures)


def differential_matrix(
    source_basis: Sequence[Monomial],
    target_basis: Sequence[Monomial],
    diff_fn: Callable[[Monomial], Polynomial],
) -> List[int]:
    """Matrix rows (one per target monomial) of the map on the given bases."""
    index = {m: i for i, m in enumerate(target_basis)}
    rows = [0] * len(target_basis)
    for j, m in enumerate(source_basis):
        for term in diff_fn(m).terms:
            i = index.get(term)
            if i is None:
                raise GF2PolyError(
                    f"differential image term falls outside the target basis at column {j}"
                )
            rows[i] |= 1 << j
    return rows


class PresentationPage:
    """A page known by presentation only: dimensions read straight off the
    reduced monomial basis, trusted wherever the basis is complete."""

    def __init__(self, pres: PagePresentation, window: TruncationWindow):
        self.presentation = pres
        self.window = window
        self.name = pres.name
        self.conditional = pres.conditional
        self._wb = pres.basis(window)

    def trusted(self, d: Multidegree) -> bool:
        return self._wb.complete(d)

    def degrees(self) -> List[Multidegree]:
        return [d for d in self._wb.degrees() if self.trusted(d)]

    def basis(self, d: Multidegree) -> Tuple[Monomial, ...]:
        return self._wb.basis(d)

    def dim(self, d: Multidegree) -> int:
        if not self.trusted(d):
            raise UntrustedDegreeError(f"degree {tuple(d)} is not trusted in this window")
        return len(self._wb.basis(d))

    def representatives(self, d: Multidegree) -> List[Polynomial]:
        if not self.trusted(d):
            raise UntrustedDegreeError(f"degree {tuple(d)} is not trusted in this window")
        a = self.presentation.alphabet
        return [Polynomial.monomial(a, m) for m in self._wb.basis(d)]


@dataclass
class _DegreeHomology:
    basis: Tuple[Monomial, ...]
    cycles: Subspace
    boundaries: Subspace
    reps: Tuple[int, ...]


class ComputedPage:
    """Degreewise homology of a presented page over a window."""

    def __init__(
        self,
        pres: PagePresentation,
        window: TruncationWindow,
        wb: WindowBasis,
        data: Dict[Multidegree, _DegreeHomology],
        name: str = "",
        conditional: bool = False,
    ):
        self.presentation = pres
        self.window = window
        self.name = name or pres.name
        self.conditional = conditional or pres.conditional
        self._wb = wb
        self._data = data
        self._shift = pres.degree_shift

    def trusted(self, d: Multidegree) -> bool:
        return (
            self._wb.complete(d)
            and self._wb.complete(d - self._shift)
            and self._wb.complete(d + self._shift)
        )

    def degrees(self) -> List[Multidegree]:
        return sorted(d for d in self._data if self.trusted(d))

    def _require(self, d: Multidegree) -> Optional[_DegreeHomology]:
        if not self.trusted(d):
            raise UntrustedDegreeError(f"degree {tuple(d)} is not trusted in this window")
        return self._data.get(d)

    def basis(self, d: Multidegree) -> Tuple[Monomial, ...]:
        return self._wb.basis(d)

    def dim(self, d: Multidegree) -> int:
        h = self._require(d)
        return 0 if h is None else len(h.reps)

    def cycle_dim(self, d: Multidegree) -> int:
        h = self._require(d)
        return 0 if h is None else h.cycles.dim

    def boundary_dim(self, d: Multidegree) -> int:
        h = self._require(d)
        return 0 if h is None else h.boundaries.dim

    def cycles_subspace(self, d: Multidegree) -> Subspace:
        h = self._require(d)
        return Subspace() if h is None else h.cycles

    def boundaries_subspace(self, d: Multidegree) -> Subspace:
        h = self._require(d)
        return Subspace() if h is None else h.boundaries

    def vector_of(self, poly: Polynomial, d: Multidegree) -> int:
        """Coordinates of a homogeneous polynomial in the degree-d basis."""
        index = {m: i for i, m in enumerate(self._wb.basis(d))}
        v = 0
        for m in poly.terms:
            i = index.get(m)
            if i is None:
                raise GF2PolyError(f"{mono_str(poly.alphabet, m)} is not a basis monomial of degree {tuple(d)}")
            v |= 1 << i
        return v

    def poly_of(self, v: int, d: Multidegree) -> Polynomial:
        basis = self._wb.basis(d)
        terms = [basis[i] for i in range(len(basis)) if (v >> i) & 1]
        return Polynomial(self.presentation.alphabet, frozenset(terms))

    def representatives(self, d: Multidegree) -> List[Polynomial]:
        h = self._require(d)
        if h is None:
            return []
        return [self.poly_of(v, d) for v in h.reps]

    def class_is_nonzero(self, poly: Polynomial, d: Multidegree) -> bool:
        """True when a cycle polynomial is not a boundary.  Raises if the
        polynomial is not a cycle."""
        h = self._require(d)
        v = self.vector_of(poly, d)
        if h is None:
            if v:
                raise GF2PolyError("nonzero vector in an empty degree")
            return False
        if v not in h.cycles:
            raise GF2PolyError(f"{poly} is not a cycle in degree {tuple(d)}")
        return v not in h.boundaries


def homology_page(
    pres: PagePresentation,
    window: TruncationWindow,
    diff_fn: Optional[Callable[[Monomial], Polynomial]] = None,
    workers: int = 1,
    name: str = "",
    conditional: bool = False,
) -> ComputedPage:
    """Compute cycles, boundaries, and representatives at every degree with
    a nonempty basis, trusting only degrees whose neighbors are complete."""
    fn = diff_fn or pres.apply_monomial
    wb = pres.basis(window)
    shift = pres.degree_shift
    degrees = wb.degrees()
    images: Dict[Multidegree, List[Polynomial]] = {}

    def images_at(d: Multidegree) -> List[Polynomial]:
        if d not in images:
            images[d] = [fn(m) for m in wb.basis(d)]
        return images[d]

    def compute(d: Multidegree) -> Tuple[Multidegree, _DegreeHomology]:
        basis = wb.basis(d)
        target = wb.basis(d + shift)
        index = {m: i for i, m in enumerate(target)}
        out_rows = [0] * len(target)
        for j, img in enumerate(images_at(d)):
            for term in img.terms:
                i = index.get(term)
                if i is None:
                    raise GF2PolyError(
                        f"{pres.name or 'page'}: image of a degree {tuple(d)} monomial misses the basis at {tuple(d + shift)}"
                    )
                out_rows[i] |= 1 << j
        cycles = kernel_basis(out_rows, len(basis))
        src = wb.basis(d - shift)
        index_d = {m: i for i, m in enumerate(basis)}
        in_rows = [0] * len(basis)
        for j, img in enumerate(images_at(d - shift)):
            for term in img.terms:
                i = index_d.get(term)
                if i is None:
                    raise GF2PolyError(
                        f"{pres.name or 'page'}: image of a degree {tuple(d - shift)} monomial misses the basis at {tuple(d)}"
                    )
                in_rows[i] |= 1 << j
        boundaries = Subspace(column_space_basis(in_rows, len(src)))
        reps = tuple(subquotient_basis(cycles, boundaries))
        return d, _DegreeHomology(
            basis=basis, cycles=Subspace(cycles), boundaries=boundaries, reps=reps
        )

    wanted = [d for d in degrees if wb.complete(d - shift) and wb.complete(d + shift) and wb.complete(d)]
    data: Dict[Multidegree, _DegreeHomology] = {}
    if workers > 1:
        # precompute image lists serially (shared cache), then assemble
        for d in wanted:
            images_at(d)
            images_at(d - shift)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for d, h in pool.map(compute, wanted):
                data[d] = h
    else:
        for d in wanted:
            d2, h = compute(d)
            data[d2] = h
    return ComputedPage(pres, window, wb, data, name=name, conditional=conditional)


class DimensionTable:
    """A sorted integer table (coordinates -> dimension) with metadata,
    serializable as aligned text, TSV, or JSON."""

    def __init__(
        self,
        coords: Sequence[str],
        rows: Dict[Tuple[int, ...], int],
        meta: Optional[Dict[str, str]] = None,
    ):
        self.coords = tuple(coords)
        self.rows = dict(rows)
        self.meta = dict(meta or {})
        for key in self.rows:
            if len(key) != len(self.coords):
                raise GF2PolyError("table row arity does not match coords")

    def dim(self, *key: int) -> int:
        return self.rows.get(tuple(key), 0)

    def sorted_items(self) -> List[Tuple[Tuple[int, ...], int]]:
        return sorted(self.rows.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DimensionTable)
            and self.coords == other.coords
            and self.rows == other.rows
            and self.meta == other.meta
        )

    def _lines(self, sep: str) -> List[str]:
        lines = [f"# {k}={self.meta[k]}" for k in sorted(self.meta)]
        lines.append(sep.join(self.coords + ("dim",)))
        for key, dim in self.sorted_items():
            lines.append(sep.join(str(x) for x in key + (dim,)))
        return lines

    def to_text(self) -> str:
        return "\n".join(self._lines(" ")) + "\n"

    def to_tsv(self) -> str:
        return "\n".join(self._lines("\t")) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "coords": list(self.coords),
            "meta": self.meta,
            "rows": [list(key) + [dim] for key, dim in self.sorted_items()],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DimensionTable":
        rows = {tuple(row[:-1]): row[-1] for row in obj["rows"]}
        return cls(obj["coords"], rows, obj.get("meta", {}))

    @classmethod
    def from_text(cls, text: str) -> "DimensionTable":
        meta: Dict[str, str] = {}
        coords: Optional[Tuple[str, ...]] = None
        rows: Dict[Tuple[int, ...], int] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            parts = line.replace("\t", " ").split()
            if coords is None:
                if parts[-1] != "dim":
                    raise GF2PolyError("table header must end with 'dim'")
                coords = tuple(parts[:-1])
                continue
            *key, dim = (int(x) for x in parts)
            rows[tuple(key)] = dim
        if coords is None:
            raise GF2PolyError("table text has no header")
        return cls(coords, rows, meta)


def page_dimension_table(
    page, coords: Sequence[str] = ("s", "t", "u"), meta: Optional[Dict[str, str]] = None
) -> DimensionTable:
    """Nonzero dimensions of a page over its trusted degrees."""
    rows: Dict[Tuple[int, ...], int] = {}
    for d in page.degrees():
        n = page.dim(d)
        if n:
            rows[tuple(d)] = n
    return DimensionTable(coords, rows, meta)
