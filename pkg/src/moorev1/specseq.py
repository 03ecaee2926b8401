"""Concrete pages and differentials for the three spectra of interest.

Tags: "S" (sphere-level page, presentation only), "M" (two-cell complex),
"EndM" (its endomorphism algebra).  Pages are indexed r = 2, 3, 4 with
differential shifts (2,1,-1) and (3,2,-2).

The page data wired in:
  d2(v1) = alpha*h(1,1)^2,  d2(h(n,1)) = v1^-1*alpha*h(1,1)^2*h(n,1) (n >= 2)
  d3(v1^2) = h(1,1)^3,      d3(x(n)) = v1^-4*h(1,1)*x(1)*x(n-1)^2    (n >= 2)
on EndM, plus d2(v1) = h(1,0)*h(1,1) on S.  The differentials on the M page
are induced through the module structure over EndM: the M page is generated
by {1, v1}, both d3-cycles, so d3 of an M monomial is computed by lifting
it to (EndM element) * v1^(0 or 1).

Everything built on top of a d3 (pages r >= 3 of EndM, the induced M
differential, the w-graded claims, the decomposition identity) is flagged
conditional: the differential values for large generator indices are
wired-in conjecture, and the checks here test their consequences rather
than prove them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .dga import (
    ComputedPage,
    D2Report,
    PagePresentation,
    PresentationPage,
    UntrustedDegreeError,
    homology_page,
    verify_d_squared,
)
from .gf2linalg import rank
from .gf2poly import (
    Alphabet,
    Generator,
    GF2PolyError,
    InvalidWindowError,
    Monomial,
    Multidegree,
    Polynomial,
    TruncationWindow,
    mono_exponent,
    sufficient_h_index,
    sufficient_x_index,
)
from .mahowald import ZBHTables, zbh_bases

__all__ = [
    "D2_SHIFT",
    "D3_SHIFT",
    "TAGS",
    "PatternSpec",
    "CheckRow",
    "Report",
    "Workbench",
    "build_page",
    "pattern_dims",
    "bo_pattern_dim",
    "bu_pattern_dim",
    "w_of_v1_exponent",
    "adams_bidegree",
]

D2_SHIFT = Multidegree(2, 1, -1)
D3_SHIFT = Multidegree(3, 2, -2)
TAGS = ("S", "M", "EndM")

V1_DEGREE = Multidegree(0, 2, 1)
ALPHA_DEGREE = Multidegree(0, -1, 0)
ALPHAP_DEGREE = Multidegree(0, 1, 1)


def h_degree(n: int) -> Multidegree:
    return Multidegree(1, 2 ** (n + 1) - 2, 0)


def x_degree(n: int) -> Multidegree:
    return Multidegree(1, 2 ** (n + 2), 1)


def w_of_v1_exponent(i: int) -> int:
    """0 for exponents 0,1 mod 4 and 2 for exponents 2,3 mod 4."""
    return 0 if i % 4 in (0, 1) else 2


def adams_bidegree(d: Multidegree) -> Tuple[int, int]:
    """Collapse a tridegree to Adams (s, t) by s -> s+u, t -> t+u."""
    return (d.s + d.u, d.t + d.u)


@dataclass(frozen=True)
class PatternSpec:
    """A bo- or bu-shaped Adams-chart pattern, optionally suspended by a
    bidegree shift applied to both Adams coordinates."""

    kind: str
    suspension: Tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.kind not in ("bo", "bu"):
            raise GF2PolyError(f"unknown pattern kind {self.kind!r}")


def bo_pattern_dim(s: int, t: int) -> int:
    """Classes v1^m h(1,1)^a with a in {0,1,2} and m = 0,1 mod 4 sit at
    Adams bidegree (m+a, 3m+2a); at most one lands on any (s, t)."""
    a = 3 * s - t
    m = t - 2 * s
    return 1 if a in (0, 1, 2) and m % 4 in (0, 1) else 0


def bu_pattern_dim(s: int, t: int) -> int:
    """Classes v1^m at Adams bidegree (m, 3m)."""
    return 1 if t == 3 * s else 0


def pattern_dims(spec: PatternSpec, s: int, t: int) -> int:
    s2 = s - spec.suspension[0]
    t2 = t - spec.suspension[1]
    return bo_pattern_dim(s2, t2) if spec.kind == "bo" else bu_pattern_dim(s2, t2)


@dataclass(frozen=True)
class CheckRow:
    claim: str
    degree: Tuple[int, ...]
    lhs: int
    rhs: int
    status: str  # ok | mismatch | insufficient

    def to_json_obj(self) -> dict:
        return {
            "claim": self.claim,
            "degree": list(self.degree),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "status": self.status,
        }


class Report:
    """A flat list of per-degree check rows with a pass/fail summary."""

    def __init__(self, name: str, rows: Sequence[CheckRow], conditional: bool = False):
        self.name = name
        self.rows = list(rows)
        self.conditional = conditional

    @property
    def ok(self) -> bool:
        return all(r.status == "ok" for r in self.rows)

    def failures(self) -> List[CheckRow]:
        return [r for r in self.rows if r.status != "ok"]

    def checked_degrees(self) -> List[Tuple[int, ...]]:
        return sorted({r.degree for r in self.rows})

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "conditional": self.conditional,
            "ok": self.ok,
            "rows": [r.to_json_obj() for r in self.rows],
        }

    def __repr__(self) -> str:
        state = "ok" if self.ok else f"{len(self.failures())} failures"
        return f"Report({self.name}: {len(self.rows)} rows, {state})"


def _parts_menu(budget: int) -> List[int]:
    """Internal degrees 6, 14, 30, 62, ... of the polynomial generators
    above h(1,1), up to the budget.  Not tied to any alphabet truncation."""
    out = []
    n = 2
    while 2 ** (n + 1) - 2 <= budget:
        out.append(2 ** (n + 1) - 2)
        n += 1
    return out


@lru_cache(maxsize=None)
def _can_sum(count: int, total: int) -> bool:
    """Can `count` parts drawn from the 6,14,30,... menu sum to `total`?"""
    if count == 0:
        return total == 0
    if total < 6 * count:
        return False
    return any(_can_sum(count - 1, total - part) for part in _parts_menu(total))


class Workbench:
    """All pages, actions, and verification reports over one window."""

    def __init__(self, window: TruncationWindow, workers: int = 1):
        self.window = window
        self.workers = workers
        self._alphabets: Dict[str, Alphabet] = {}
        self._presentations: Dict[Tuple[str, int], PagePresentation] = {}
        self._pages: Dict[Tuple[str, int], Union[PresentationPage, ComputedPage]] = {}
        self._zbh: Optional[ZBHTables] = None
        self._d3m_cache: Dict[Monomial, Polynomial] = {}
        self._slice_cache: Dict[Tuple[Multidegree, int], List[int]] = {}
        self._slice_mat_cache: Dict[Tuple[Multidegree, int], List[int]] = {}

    # ---- alphabets ----

    def _h_index(self) -> int:
        w = self.window
        j_floor = min(w.v1_exponent_range[0], w.u_range[0])
        n = sufficient_h_index(w.t_range[1], j_floor)
        if w.max_generator_index < n:
            raise InvalidWindowError(
                f"window caps generators at index {w.max_generator_index} but "
                f"its ranges need h(n,1) up to n={n}"
            )
        return n

    def _x_index(self) -> int:
        w = self.window
        # alpha' and each x(n) carry u-degree 1, so monomials reach v1
        # exponents up to one per s below the u floor
        j_floor = min(w.v1_exponent_range[0], w.u_range[0] - (1 + w.s_range[1]))
        n = sufficient_x_index(w.t_range[1], j_floor)
        # the induced differential on the M page rewrites h(n,1) as an
        # x(n-1) lift, so keep the two truncations aligned
        return max(n, self._h_index() - 1)

    def alphabet(self, tag: str, r: int) -> Alphabet:
        if tag not in TAGS:
            raise GF2PolyError(f"unknown spectrum tag {tag!r}")
        key = tag + ("x" if tag == "EndM" and r >= 3 else "")
        got = self._alphabets.get(key)
        if got is not None:
            return got
        n_max = self._h_index()
        hs = [Generator(f"h({n},1)", h_degree(n)) for n in range(1, n_max + 1)]
        v1 = Generator("v1", V1_DEGREE, invertible=True)
        if tag == "S":
            gens = [v1, Generator("h(1,0)", Multidegree(1, 1, 0))] + hs
        elif tag == "M":
            gens = [v1] + hs
        elif r <= 2:
            gens = [v1, Generator("alpha", ALPHA_DEGREE, nilpotent_square=True)] + hs
        else:
            gens = [
                Generator("v1", V1_DEGREE, invertible=True, stride=2),
                Generator("alpha", ALPHA_DEGREE, nilpotent_square=True),
                Generator("alphap", ALPHAP_DEGREE, nilpotent_square=True),
                Generator("h(1,1)", h_degree(1)),
            ] + [Generator(f"x({n})", x_degree(n)) for n in range(1, self._x_index() + 1)]
        a = Alphabet(gens)
        self._alphabets[key] = a
        return a

    # ---- presentations ----

    def presentation(self, tag: str, r: int) -> PagePresentation:
        key = (tag, r)
        got = self._presentations.get(key)
        if got is None:
            got = self._build_presentation(tag, r)
            self._presentations[key] = got
        return got

    def _build_presentation(self, tag: str, r: int) -> PagePresentation:
        if tag == "S":
            if r != 2:
                raise GF2PolyError("only the r=2 page is presented for S")
            a = self.alphabet("S", 2)
            # one differential value is known here; the others stay
            # unspecified rather than silently zero
            return PagePresentation(
                a,
                D2_SHIFT,
                {"v1": Polynomial.parse(a, "h(1,0)*h(1,1)")},
                name="sphere r=2",
            )
        if tag == "M":
            a = self.alphabet("M", 2)
            if r == 2:
                zero = Polynomial.zero(a)
                diffs = {g.name: zero for g in a}
                return PagePresentation(a, D2_SHIFT, diffs, name="two-cell r=2")
            if r == 3:
                # same algebra as r=2; the differential is induced through
                # the module structure, not a derivation in these generators
                return PagePresentation(a, D3_SHIFT, {}, name="two-cell r=3")
            raise GF2PolyError(f"no presentation for (M, r={r})")
        if r == 2:
            a = self.alphabet("EndM", 2)
            diffs = {
                "v1": Polynomial.parse(a, "alpha*h(1,1)^2"),
                "alpha": Polynomial.zero(a),
                "h(1,1)": Polynomial.zero(a),
            }
            for n in range(2, self._h_index() + 1):
                diffs[f"h({n},1)"] = Polynomial.parse(a, f"v1^-1*alpha*h(1,1)^2*h({n},1)")
            return PagePresentation(a, D2_SHIFT, diffs, name="endomorphism r=2")
        if r == 3:
            a = self.alphabet("EndM", 3)
            relations = tuple(
                Polynomial.parse(a, text).monomials_sorted()[0]
                for text in ("alpha*h(1,1)^2", "alpha*alphap")
            )
            diffs = {
                "v1": Polynomial.parse(a, "h(1,1)^3"),
                "alpha": Polynomial.zero(a),
                "alphap": Polynomial.zero(a),
                "h(1,1)": Polynomial.zero(a),
                "x(1)": Polynomial.zero(a),
            }
            for n in range(2, self._x_index() + 1):
                diffs[f"x({n})"] = Polynomial.parse(a, f"v1^-4*h(1,1)*x(1)*x({n-1})^2")
            return PagePresentation(
                a, D3_SHIFT, diffs, relations=relations, name="endomorphism r=3", conditional=True
            )
        raise GF2PolyError(f"no presentation for (EndM, r={r})")

    # ---- pages ----

    def page(self, tag: str, r: int) -> Union[PresentationPage, ComputedPage]:
        key = (tag, r)
        got = self._pages.get(key)
        if got is None:
            got = self._build_page(tag, r)
            self._pages[key] = got
        return got

    def _build_page(self, tag: str, r: int):
        if tag not in TAGS:
            raise GF2PolyError(f"unknown spectrum tag {tag!r}")
        if tag == "S":
            if r == 2:
                return PresentationPage(self.presentation("S", 2), self.window)
            raise GF2PolyError(
                "pages past r=2 are not available for S: only d2(v1) is known there"
            )
        if r not in (2, 3, 4):
            raise GF2PolyError(f"page index {r} is not supported")
        if tag == "M":
            if r in (2, 3):
                return PresentationPage(self.presentation("M", r), self.window)
            return homology_page(
                self.presentation("M", 3),
                self.window,
                diff_fn=self.induced_d3m_monomial,
                workers=self.workers,
                name="two-cell r=4",
                conditional=True,
            )
        if r == 2:
            return PresentationPage(self.presentation("EndM", 2), self.window)
        return homology_page(
            self.presentation("EndM", r - 1),
            self.window,
            workers=self.workers,
            name=f"endomorphism r={r}",
            conditional=True,
        )

    # ---- module structure ----

    def project_to_m(self, r: int, e: Polynomial) -> Polynomial:
        """Quotient map from an EndM page element to the M page: kill the
        monomials divisible by a torsion generator, rewrite each x(n)
        factor as v1*h(n+1,1)."""
        src = self.alphabet("EndM", r)
        if e.alphabet != src:
            raise GF2PolyError("element does not live on the EndM page of this workbench")
        dst = self.alphabet("M", 2)
        out = Polynomial.zero(dst)
        for mono in e.terms:
            term = Polynomial.one(dst)
            for gi, exp in mono:
                name = src[gi].name
                if name in ("alpha", "alphap"):
                    term = Polynomial.zero(dst)
                    break
                if name.startswith("x("):
                    n = int(name[2:-1])
                    term = term * Polynomial.gen(dst, "v1", exp) * Polynomial.gen(
                        dst, f"h({n + 1},1)", exp
                    )
                else:
                    term = term * Polynomial.gen(dst, name, exp)
            out = out + term
        return out

    def act(self, r: int, e: Polynomial, m: Polynomial) -> Polynomial:
        """Action of an EndM page element on an M page element."""
        if m.alphabet != self.alphabet("M", 2):
            raise GF2PolyError("second factor does not live on the M page")
        return self.project_to_m(r, e) * m

    def lift_to_endm(self, mono: Monomial) -> Tuple[Monomial, int]:
        """Write an M monomial as (page-3 EndM monomial) * v1^epsilon with
        epsilon in {0,1}: each h(n,1) with n >= 2 becomes v1^-1*x(n-1) and
        the leftover odd v1 power is the second module generator."""
        src = self.alphabet("M", 2)
        dst = self.alphabet("EndM", 3)
        k = a = 0
        bs: List[Tuple[int, int]] = []
        for gi, exp in mono:
            name = src[gi].name
            if name == "v1":
                k = exp
            elif name == "h(1,1)":
                a = exp
            else:
                bs.append((int(name[2:name.index(",")]), exp))
        j = k - sum(e for _, e in bs)
        eps = j % 2
        parts: List[Tuple[int, int]] = []
        if j - eps != 0:
            parts.append((dst.index("v1"), j - eps))
        if a:
            parts.append((dst.index("h(1,1)"), a))
        for n, exp in bs:
            parts.append((dst.index(f"x({n - 1})"), exp))
        return tuple(sorted(parts)), eps

    def induced_d3m(self, poly: Polynomial) -> Polynomial:
        if poly.alphabet != self.alphabet("M", 2):
            raise GF2PolyError("polynomial does not live on the M page")
        out = Polynomial.zero(poly.alphabet)
        for mono in poly.terms:
            out = out + self.induced_d3m_monomial(mono)
        return out

    def induced_d3m_monomial(self, mono: Monomial) -> Polynomial:
        """d3 on the M page through the module structure: both module
        generators 1 and v1 are cycles, so d3(e * v1^eps) = d3(e) * v1^eps."""
        got = self._d3m_cache.get(mono)
        if got is None:
            lifted, eps = self.lift_to_endm(mono)
            image = self.presentation("EndM", 3).apply_monomial(lifted)
            got = self.project_to_m(3, image)
            if eps:
                got = got * Polynomial.gen(got.alphabet, "v1", 1)
            self._d3m_cache[mono] = got
        return got

    # ---- w grading ----

    def w_degree(self, mono: Monomial) -> int:
        """w of an M monomial: each h(n,1) with n >= 2 is a v1^-1*x(n-1)
        in disguise and x factors carry no w, so only the corrected v1
        exponent and the h(1,1) exponent count."""
        src = self.alphabet("M", 2)
        k = a = big_b = 0
        for gi, exp in mono:
            name = src[gi].name
            if name == "v1":
                k = exp
            elif name == "h(1,1)":
                a = exp
            else:
                big_b += exp
        return w_of_v1_exponent(k - big_b) + a

    def verify_w_grading(self) -> Report:
        """d3 raises w by exactly 1 on every in-window M basis monomial."""
        page = self.page("M", 3)
        rows = []
        for d in page.degrees():
            for mono in page.basis(d):
                image = self.induced_d3m_monomial(mono)
                if image.is_zero():
                    continue
                w_in = self.w_degree(mono)
                w_out = sorted({self.w_degree(m) for m in image.terms})
                ok = w_out == [w_in + 1]
                rows.append(
                    CheckRow(
                        claim="w-shift",
                        degree=tuple(d),
                        lhs=w_in + 1,
                        rhs=w_out[0] if len(w_out) == 1 else -1,
                        status="ok" if ok else "mismatch",
                    )
                )
        return Report("w-grading", rows, conditional=True)

    # ---- d squared ----

    def verify_differentials_square_to_zero(self) -> Dict[str, D2Report]:
        return {
            "EndM r=2": verify_d_squared(self.presentation("EndM", 2), self.window),
            "M r=2": verify_d_squared(self.presentation("M", 2), self.window),
            "EndM r=3": verify_d_squared(self.presentation("EndM", 3), self.window),
            "M r=3": verify_d_squared(
                self.presentation("M", 3), self.window, diff_fn=self.induced_d3m_monomial
            ),
        }

    # ---- page comparisons ----

    def verify_e3_presentation(self) -> Report:
        """Dimensionwise match between the homology of (E2(EndM), d2) and
        the presented page 3, at every degree trusted on both sides."""
        computed = self.page("EndM", 3)
        presented = PresentationPage(self.presentation("EndM", 3), self.window)
        rows = []
        for d in sorted(set(computed.degrees()) | set(presented.degrees())):
            if not (computed.trusted(d) and presented.trusted(d)):
                continue
            lhs = computed.dim(d)
            rhs = presented.dim(d)
            rows.append(
                CheckRow(
                    claim="e3-presentation",
                    degree=tuple(d),
                    lhs=lhs,
                    rhs=rhs,
                    status="ok" if lhs == rhs else "mismatch",
                )
            )
        return Report("e3-presentation", rows, conditional=True)

    def verify_module_isomorphisms(self) -> Report:
        """dim E2(M) = dim E2(EndM)/(alpha) = dim E2(S)/(h(1,0)), degree by
        degree."""
        m_page = self.page("M", 2)
        endm = self.page("EndM", 2)
        sphere = self.page("S", 2)
        ai = self.alphabet("EndM", 2).index("alpha")
        hi = self.alphabet("S", 2).index("h(1,0)")
        rows = []
        for d in m_page.degrees():
            if not (endm.trusted(d) and sphere.trusted(d)):
                continue
            lhs = m_page.dim(d)
            checks = (
                ("m-vs-endm-mod-alpha", sum(1 for m in endm.basis(d) if mono_exponent(m, ai) == 0)),
                ("m-vs-s-mod-h10", sum(1 for m in sphere.basis(d) if mono_exponent(m, hi) == 0)),
            )
            for claim, rhs in checks:
                rows.append(
                    CheckRow(
                        claim=claim,
                        degree=tuple(d),
                        lhs=lhs,
                        rhs=rhs,
                        status="ok" if lhs == rhs else "mismatch",
                    )
                )
        return Report("module-isomorphisms", rows)

    # ---- the w-sliced complex ----

    def _slice_indices(self, d: Multidegree, n: int) -> List[int]:
        key = (d, n)
        got = self._slice_cache.get(key)
        if got is None:
            basis = self.page("M", 3).basis(d)
            got = [i for i, mono in enumerate(basis) if self.w_degree(mono) == n]
            self._slice_cache[key] = got
        return got

    def _slice_matrix(self, d: Multidegree, n: int) -> List[int]:
        """Matrix of d3 from slice n at d to slice n+1 at d+shift, in the
        slice bases.  Raises if d3 breaks the w grading."""
        key = (d, n)
        got = self._slice_mat_cache.get(key)
        if got is not None:
            return got
        page = self.page("M", 3)
        src_basis = page.basis(d)
        target_basis = page.basis(d + D3_SHIFT)
        tgt_pos = {
            target_basis[i]: row
            for row, i in enumerate(self._slice_indices(d + D3_SHIFT, n + 1))
        }
        rows = [0] * len(tgt_pos)
        for col, i in enumerate(self._slice_indices(d, n)):
            for mono in self.induced_d3m_monomial(src_basis[i]).terms:
                row = tgt_pos.get(mono)
                if row is None:
                    raise GF2PolyError(
                        f"d3 image of a w={n} monomial leaves slice {n + 1} at {tuple(d + D3_SHIFT)}"
                    )
                rows[row] |= 1 << col
        self._slice_mat_cache[key] = rows
        return rows

    def _slice_kernel_dim(self, d: Multidegree, n: int) -> int:
        return len(self._slice_indices(d, n)) - rank(self._slice_matrix(d, n))

    def _slice_image_dim(self, d: Multidegree, n: int) -> int:
        return rank(self._slice_matrix(d, n))

    def _slice_homology_dim(self, d: Multidegree, n: int) -> int:
        h = self._slice_kernel_dim(d, n)
        if n > 0:
            h -= self._slice_image_dim(d - D3_SHIFT, n - 1)
        return h

    # ---- pattern counts off the squares-complex tables ----

    def mahowald_tables(self) -> ZBHTables:
        if self._zbh is None:
            w = self.window
            q_max = w.t_range[1] - 2 * w.u_range[0] + 3 * w.s_range[1] + 20
            p_max = 2 * w.s_range[1] + 8
            self._zbh = zbh_bases(p_max, q_max, workers=self.workers)
        return self._zbh

    def _pattern_count(self, kind: str, d: Multidegree, a: int, residues: Tuple[int, int]) -> int:
        """Number of degree-d monomials v1^m h(1,1)^a (x part) where the x
        part runs over a table slice of the complex of squares and m is
        constrained mod 4.  The x part must sit at bidegree
        (2(s-a), t-2u+3s-5a), which forces m = u-(s-a)."""
        if a < 0:
            return 0
        parts = d.s - a
        if parts < 0:
            return 0
        if (d.u - parts) % 4 not in residues:
            return 0
        q = d.t - 2 * d.u + 3 * d.s - 5 * a
        if q < 0:
            return 0
        p = 2 * parts
        tables = self.mahowald_tables()
        if p > tables.p_max or q > tables.q_max:
            raise UntrustedDegreeError(
                f"pattern count at {tuple(d)} needs bidegree ({p}, {q}) beyond the computed box"
            )
        picker = {"Z": tables.z_dim, "B": tables.b_dim, "H": tables.h_dim}[kind]
        return picker(p, q)

    def _zf(self, n: int, d: Multidegree) -> int:
        return self._pattern_count("Z", d, n, (0, 1))

    def _hf(self, n: int, d: Multidegree) -> int:
        return self._pattern_count("H", d, n, (0, 1))

    def _bv(self, n: int, d: Multidegree) -> int:
        return self._pattern_count("B", d, n - 2, (2, 3))

    def _bf(self, n: int, d: Multidegree) -> int:
        return self._pattern_count("B", d, n, (0, 1))

    # ---- the slice claims ----

    def _complete3(self, d: Multidegree) -> bool:
        page = self.page("M", 3)
        return page.trusted(d - D3_SHIFT) and page.trusted(d) and page.trusted(d + D3_SHIFT)

    def verify_e4_claims(self) -> Report:
        """Per-degree dimension checks of the sliced page-4 description.

        claim-1: slice-0 homology counts cycle patterns;
        claim-2: slice-1 homology counts homology patterns;
        claim-3: slice 2 adds the boundary patterns arriving with w(v1)=2;
        claim-4: slices n >= 3 vanish;
        claim-i: kernel dimensions per slice;
        claim-ii: image dimensions per slice, with im = ker above slice 1.
        """
        wb = self.page("M", 3)
        rows: List[CheckRow] = []
        for d in wb.degrees():
            if not self._complete3(d):
                continue
            n_here = {self.w_degree(m) for m in wb.basis(d)}
            n_prev = {self.w_degree(m) for m in wb.basis(d - D3_SHIFT)}
            for n in sorted(n_here | {n + 1 for n in n_prev}):
                h = self._slice_homology_dim(d, n)
                if n == 0:
                    rows.append(self._row("claim-1", d, h, self._zf(0, d)))
                elif n == 1:
                    rows.append(self._row("claim-2", d, h, self._hf(1, d)))
                elif n == 2:
                    rows.append(self._row("claim-3", d, h, self._hf(2, d) + self._bv(2, d)))
                else:
                    rows.append(self._row("claim-4", d, h, 0))
            for n in sorted(n_here):
                ker = self._slice_kernel_dim(d, n)
                expect = self._zf(n, d) if n < 2 else self._zf(n, d) + self._bv(n, d)
                rows.append(self._row("claim-i", d, ker, expect, extra=(n,)))
            # the image claim reads dimensions one shift up, so it needs
            # one more complete degree
            d_next = d + D3_SHIFT
            if self._complete3(d_next):
                for n in sorted(n_here):
                    im = self._slice_image_dim(d, n)
                    if n < 2:
                        expect = self._bf(n + 1, d_next)
                    else:
                        expect = self._slice_kernel_dim(d_next, n + 1)
                    rows.append(self._row("claim-ii", d, im, expect, extra=(n,)))
        return Report("e4-claims", rows, conditional=True)

    @staticmethod
    def _row(claim: str, d: Multidegree, lhs: int, rhs: int, extra: Tuple[int, ...] = ()) -> CheckRow:
        return CheckRow(
            claim=claim,
            degree=tuple(d) + extra,
            lhs=lhs,
            rhs=rhs,
            status="ok" if lhs == rhs else "mismatch",
        )

    def verify_e4_dimensions(self) -> Report:
        """dim of the computed page 4 of M equals the sum of the sliced
        closed forms, degree by degree."""
        page4 = self.page("M", 4)
        rows = []
        for d in page4.degrees():
            lhs = page4.dim(d)
            rhs = self._zf(0, d) + self._hf(1, d) + self._hf(2, d) + self._bv(2, d)
            rows.append(self._row("e4-closed-form", d, lhs, rhs))
        return Report("e4-closed-form", rows, conditional=True)

    # ---- survival fates ----

    def survival_report(self) -> Report:
        """The four named survivors of page 4 of EndM, then the fate of
        every in-window v1^m x(n) class (n >= 2): each must support or be
        hit by a nonzero d2 or d3."""
        rows: List[CheckRow] = []
        page4 = self.page("EndM", 4)
        a3 = self.alphabet("EndM", 3)
        for text in ("alpha", "alphap", "h(1,1)", "x(1)"):
            poly = Polynomial.parse(a3, text)
            d = poly.multidegree()
            alive = page4.trusted(d) and page4.class_is_nonzero(poly, d)
            rows.append(
                CheckRow(
                    claim=f"survives-to-e4:{text}",
                    degree=tuple(d),
                    lhs=int(alive),
                    rhs=1,
                    status="ok" if alive else "mismatch",
                )
            )
        rows.extend(self._xn_fates())
        return Report("survival", rows, conditional=True)

    def _xn_fates(self) -> List[CheckRow]:
        """v1^m x(n) = v1^(m+1) h(n+1,1): odd m supports d2; even m lives
        on page 3 and must support d3 or be a d3 boundary there."""
        pres2 = self.presentation("EndM", 2)
        pres3 = self.presentation("EndM", 3)
        a2 = pres2.alphabet
        a3 = pres3.alphabet
        page3 = self.page("EndM", 3)
        v1_lo, v1_hi = self.window.v1_exponent_range
        rows = []
        for n in range(2, min(self._x_index(), self._h_index() - 1) + 1):
            for m in range(v1_lo, v1_hi + 1):
                if not (v1_lo <= m + 1 <= v1_hi):
                    continue
                d = V1_DEGREE.scaled(m + 1) + h_degree(n + 1)
                if not self.window.contains(d):
                    continue
                e2 = Polynomial.gen(a2, "v1", m + 1) * Polynomial.gen(a2, f"h({n + 1},1)")
                if m % 2:
                    fate = "supports-d2" if not pres2.apply(e2).is_zero() else "missed"
                else:
                    e3 = Polynomial.gen(a3, "v1", m) * Polynomial.gen(a3, f"x({n})")
                    if not pres3.apply(e3).is_zero():
                        fate = "supports-d3"
                    elif page3.trusted(d) and not page3.class_is_nonzero(e2, d):
                        fate = "hit-by-d2"
                    else:
                        fate = "missed"
                rows.append(
                    CheckRow(
                        claim=f"dies:v1^{m}*x({n})",
                        degree=tuple(d),
                        lhs=int(fate != "missed"),
                        rhs=1,
                        status="ok" if fate != "missed" else "mismatch",
                    )
                )
        return rows

    # ---- the decomposition identity ----

    def low_w_monomial_possible(self, d: Multidegree) -> bool:
        """Is there any M monomial of degree d with w <= 2?  Exact and
        window-independent: parts may use arbitrarily large generators."""
        s, t, u = d
        if s < 0:
            return False
        budget = t - 2 * u
        for a1 in (0, 1, 2):
            count = s - a1
            if count < 0:
                continue
            if w_of_v1_exponent(u - count) + a1 > 2:
                continue
            if _can_sum(count, budget - 2 * a1):
                return True
        return False

    def mahowald_decomposition_check(
        self,
        stem_max: int = 24,
        filt_max: int = 12,
        stem_min: Optional[int] = None,
        filt_min: Optional[int] = None,
    ) -> Report:
        """Adams-cell comparison: total dim of page 4 of M against one bo
        pattern per homology class of the complex of squares plus one bu
        pattern per boundary class, each suspended by its bidegree.

        A cell is covered when every tridegree collapsing to it either is
        trusted in the window or provably carries no monomial of w <= 2,
        so that its page-4 part vanishes by the slice claims.  Uncovered
        cells are reported as insufficient, never silently dropped.

        Rows are keyed by Adams (s, t) = (filtration, internal degree).
        """
        w = self.window
        page4 = self.page("M", 4)
        tables = self.mahowald_tables()
        if stem_min is None:
            stem_min = w.t_range[0] - w.s_range[1]
        if filt_min is None:
            filt_min = w.u_range[0]
        rows: List[CheckRow] = []
        for stem in range(stem_min, stem_max + 1):
            for filt in range(filt_min, filt_max + 1):
                lhs, covered = self._cell_lhs(page4, stem, filt)
                rhs, rhs_exact = self._cell_rhs(tables, filt, stem + filt)
                if not (covered and rhs_exact):
                    status = "insufficient"
                else:
                    status = "ok" if lhs == rhs else "mismatch"
                rows.append(
                    CheckRow(
                        claim="decomposition",
                        degree=(filt, stem + filt),
                        lhs=lhs,
                        rhs=rhs,
                        status=status,
                    )
                )
        return Report("decomposition", rows, conditional=True)

    def _cell_lhs(self, page4, stem: int, filt: int) -> Tuple[int, bool]:
        """Total page-4 dimension over the tridegrees collapsing to the
        cell, plus whether the scan is conclusive."""
        lhs = 0
        covered = True
        s_top = self.window.s_range[1]
        # past this, a w <= 2 monomial would cost more internal degree than
        # the cell provides (each factor above h(1,1) costs at least 6)
        low_w_top = (stem - 2 * filt + 8) // 3 + 1
        for s in range(0, max(s_top, low_w_top) + 1):
            d = Multidegree(s, stem + s, filt - s)
            if page4.trusted(d):
                lhs += page4.dim(d)
            elif self.low_w_monomial_possible(d):
                covered = False
        return lhs, covered

    def _cell_rhs(self, tables: ZBHTables, s_adams: int, t_adams: int) -> Tuple[int, bool]:
        """Pattern sum over the named classes, plus whether the computed
        (p, q) box certainly contains every class that can contribute."""
        rhs = 0
        c = t_adams - 3 * s_adams
        # a class at (p, q) contributes only when q is within 2 of c + 3p,
        # and the complex of squares forces q >= 9p/2, so p stays small
        p_pot = 2 * (c + 2) // 3
        exact = p_pot <= tables.p_max and c + 3 * max(p_pot, 0) + 2 <= tables.q_max
        for p in range(0, min(p_pot, tables.p_max) + 1, 2):
            for q in (c + 3 * p, c + 3 * p + 1, c + 3 * p + 2):
                if q < 0 or q > tables.q_max:
                    continue
                h = tables.h_dim(p, q)
                if h:
                    rhs += h * bo_pattern_dim(s_adams - p, t_adams - q)
                b = tables.b_dim(p, q)
                if b:
                    rhs += b * bu_pattern_dim(s_adams - p, t_adams - q)
        return rhs, exact


def build_page(tag: str, r: int, window: TruncationWindow, workers: int = 1):
    """One-shot page construction; use a Workbench to share caches."""
    return Workbench(window, workers=workers).page(tag, r)
