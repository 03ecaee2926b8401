import random

import pytest

from moorev1.dga import ComputedPage, PresentationPage, UntrustedDegreeError
from moorev1.gf2poly import (
    GF2PolyError,
    InvalidWindowError,
    Multidegree,
    Polynomial,
    TruncationWindow,
    default_window,
)
from moorev1.specseq import (
    D2_SHIFT,
    D3_SHIFT,
    PatternSpec,
    Report,
    Workbench,
    adams_bidegree,
    bo_pattern_dim,
    bu_pattern_dim,
    build_page,
    pattern_dims,
    w_of_v1_exponent,
)


@pytest.fixture(scope="module")
def wb():
    return Workbench(default_window(40, 8, -8, 8))


def parse(wb, tag, r, text):
    return Polynomial.parse(wb.alphabet(tag, r), text)


# ---- alphabets and construction ----


def test_alphabets_per_tag(wb):
    assert wb.alphabet("M", 2).names() == ("v1", "h(1,1)", "h(2,1)", "h(3,1)", "h(4,1)")
    assert wb.alphabet("S", 2).names()[:3] == ("v1", "h(1,0)", "h(1,1)")
    assert "alpha" in wb.alphabet("EndM", 2).names()
    a3 = wb.alphabet("EndM", 3)
    assert a3.generator("v1").stride == 2
    assert "alphap" in a3.names()
    assert "x(1)" in a3.names()


def test_x_truncation_tracks_h_truncation(wb):
    # every h(n,1) of the M alphabet can be rewritten through x(n-1)
    n_max = max(int(n[2 : n.index(",")]) for n in wb.alphabet("M", 2).names() if n.startswith("h("))
    assert f"x({n_max - 1})" in wb.alphabet("EndM", 3).names()


def test_window_generator_cap_enforced():
    w = TruncationWindow(
        max_generator_index=2,
        v1_exponent_range=(-8, 8),
        s_range=(0, 8),
        t_range=(-17, 40),
        u_range=(-8, 8),
    )
    with pytest.raises(InvalidWindowError):
        Workbench(w).page("M", 2)


def test_build_page_kinds(wb):
    assert isinstance(wb.page("S", 2), PresentationPage)
    assert isinstance(wb.page("M", 2), PresentationPage)
    assert isinstance(wb.page("M", 3), PresentationPage)
    assert isinstance(wb.page("EndM", 2), PresentationPage)
    assert isinstance(wb.page("EndM", 3), ComputedPage)
    assert isinstance(wb.page("EndM", 4), ComputedPage)
    assert isinstance(wb.page("M", 4), ComputedPage)
    assert wb.page("M", 3) is wb.page("M", 3)


def test_unsupported_pages(wb):
    with pytest.raises(GF2PolyError):
        wb.page("S", 3)
    with pytest.raises(GF2PolyError):
        wb.page("M", 5)
    with pytest.raises(GF2PolyError):
        wb.page("X", 2)


def test_build_page_one_shot():
    page = build_page("EndM", 2, default_window(20, 6, -4, 4))
    assert page.dim(Multidegree(0, -1, 0)) == 1


# ---- frozen page dimensions ----


def test_page_dimensions(wb):
    assert wb.page("EndM", 2).dim(Multidegree(0, -1, 0)) == 1
    e3 = wb.page("EndM", 3)
    assert e3.dim(Multidegree(2, 3, 0)) == 0
    assert e3.dim(Multidegree(1, 3, 1)) == 1
    assert e3.dim(Multidegree(0, 0, 0)) == 1
    e4m = wb.page("M", 4)
    assert e4m.dim(Multidegree(3, 6, 0)) == 0
    assert e4m.dim(Multidegree(1, 8, 1)) == 1


def test_sphere_page_quotient_dims(wb):
    # killing h(1,0) in the sphere basis recovers the M dimensions
    sphere = wb.page("S", 2)
    d = Multidegree(2, 8, 1)
    hi = wb.alphabet("S", 2).index("h(1,0)")
    reduced = [m for m in sphere.basis(d) if all(gi != hi for gi, _ in m)]
    assert len(reduced) == wb.page("M", 2).dim(d)


# ---- module structure ----


def test_act_examples(wb):
    one_m = Polynomial.one(wb.alphabet("M", 2))
    assert wb.act(2, parse(wb, "EndM", 2, "alpha"), one_m).is_zero()
    assert str(wb.act(3, parse(wb, "EndM", 3, "x(1)"), parse(wb, "M", 2, "v1"))) == "v1^2*h(2,1)"
    assert str(wb.act(2, parse(wb, "EndM", 2, "v1*h(1,1)"), one_m)) == "v1*h(1,1)"


def test_project_to_m(wb):
    assert str(wb.project_to_m(3, parse(wb, "EndM", 3, "x(2)"))) == "v1*h(3,1)"
    assert wb.project_to_m(3, parse(wb, "EndM", 3, "alphap*h(1,1)")).is_zero()
    got = wb.project_to_m(3, parse(wb, "EndM", 3, "v1^-4*h(1,1)*x(1)*x(2)^2"))
    assert str(got) == "v1^-1*h(1,1)*h(2,1)*h(3,1)^2"


def test_act_rejects_wrong_alphabet(wb):
    with pytest.raises(GF2PolyError):
        wb.act(2, parse(wb, "M", 2, "v1"), parse(wb, "M", 2, "v1"))
    with pytest.raises(GF2PolyError):
        wb.act(2, parse(wb, "EndM", 2, "alpha"), parse(wb, "EndM", 2, "alpha"))


def test_action_compatible_with_d2(wb):
    # d2(e*m) = d2(e)*m + e*d2(m): every piece vanishes on the M page
    # because d2(e) is always divisible by the torsion generator
    rng = random.Random(11)
    pres2 = wb.presentation("EndM", 2)
    pres_m2 = wb.presentation("M", 2)
    endm_page = wb.page("EndM", 2)
    m_page = wb.page("M", 2)
    endm_degrees = [d for d in endm_page.degrees() if endm_page.basis(d)]
    m_degrees = [d for d in m_page.degrees() if m_page.basis(d)]
    a_m = wb.alphabet("M", 2)
    for _ in range(40):
        e_mono = rng.choice(endm_page.basis(rng.choice(endm_degrees)))
        m_mono = rng.choice(m_page.basis(rng.choice(m_degrees)))
        e = Polynomial.monomial(pres2.alphabet, e_mono)
        m = Polynomial.monomial(a_m, m_mono)
        product = wb.act(2, e, m)
        assert pres_m2.apply(product).is_zero()
        assert wb.act(2, pres2.apply(e), m).is_zero()
        assert (product * pres_m2.apply(m)).is_zero()


# ---- the induced differential ----


def test_induced_d3m_values(wb):
    cases = [
        ("v1^2", "h(1,1)^3"),
        ("v1^4", "0"),
        ("v1", "0"),
        ("h(1,1)", "0"),
        ("h(2,1)", "v1^-2*h(1,1)^3*h(2,1)"),
        ("h(3,1)", "v1^-2*h(1,1)^3*h(3,1) + v1^-2*h(1,1)*h(2,1)^3"),
        ("h(4,1)", "v1^-2*h(1,1)^3*h(4,1) + v1^-2*h(1,1)*h(2,1)*h(3,1)^2"),
        ("v1*h(3,1)", "v1^-1*h(1,1)*h(2,1)^3"),
    ]
    a_m = wb.alphabet("M", 2)
    for text, want in cases:
        got = wb.induced_d3m(Polynomial.parse(a_m, text))
        assert got == Polynomial.parse(a_m, want), text


def test_induced_d3m_not_naive_leibniz(wb):
    # v1 is not a cycle lift: d3(v1*h(3,1)) differs from v1*d3(h(3,1))
    a_m = wb.alphabet("M", 2)
    v1 = Polynomial.parse(a_m, "v1")
    naive = v1 * wb.induced_d3m(Polynomial.parse(a_m, "h(3,1)"))
    actual = wb.induced_d3m(Polynomial.parse(a_m, "v1*h(3,1)"))
    assert naive != actual


def test_induced_d3m_squares_to_zero(wb):
    rng = random.Random(23)
    page = wb.page("M", 3)
    degrees = [d for d in page.degrees() if page.basis(d)]
    for _ in range(60):
        mono = rng.choice(page.basis(rng.choice(degrees)))
        once = wb.induced_d3m_monomial(mono)
        assert wb.induced_d3m(once).is_zero()


def test_induced_d3m_is_additive(wb):
    a_m = wb.alphabet("M", 2)
    p = Polynomial.parse(a_m, "h(2,1) + h(3,1)")
    want = wb.induced_d3m(Polynomial.parse(a_m, "h(2,1)")) + wb.induced_d3m(
        Polynomial.parse(a_m, "h(3,1)")
    )
    assert wb.induced_d3m(p) == want


# ---- w grading ----


def test_w_of_v1_exponent():
    assert [w_of_v1_exponent(i) for i in range(-4, 5)] == [0, 0, 2, 2, 0, 0, 2, 2, 0]


def test_w_degree_values(wb):
    a_m = wb.alphabet("M", 2)
    cases = [
        ("v1", 0),
        ("v1^2", 2),
        ("v1^-1", 2),
        ("h(1,1)", 1),
        ("h(2,1)", 2),
        ("v1*h(2,1)", 0),
        ("h(2,1)^2", 2),
        ("v1^-2*h(1,1)^3", 5),
        ("v1^2*h(1,1)*h(3,1)", 1),
    ]
    for text, want in cases:
        mono = Polynomial.parse(a_m, text).monomials_sorted()[0]
        assert wb.w_degree(mono) == want, text


def test_w_grading_report(wb):
    rep = wb.verify_w_grading()
    assert rep.ok
    assert len(rep.rows) > 500
    assert rep.conditional


# ---- verification reports ----


def test_d_squared_reports(wb):
    reps = wb.verify_differentials_square_to_zero()
    assert set(reps) == {"EndM r=2", "M r=2", "EndM r=3", "M r=3"}
    for rep in reps.values():
        assert rep.ok
        assert rep.checked > 100


def test_e3_presentation_report(wb):
    rep = wb.verify_e3_presentation()
    assert rep.ok
    rows = {r.degree: r for r in rep.rows}
    assert rows[(1, 3, 1)].lhs == rows[(1, 3, 1)].rhs == 1
    assert rows[(2, 3, 0)].lhs == 0
    assert rows[(0, 0, 0)].lhs == 1


def test_module_isomorphism_report(wb):
    rep = wb.verify_module_isomorphisms()
    assert rep.ok
    claims = {r.claim for r in rep.rows}
    assert claims == {"m-vs-endm-mod-alpha", "m-vs-s-mod-h10"}


def test_e4_claims_report(wb):
    rep = wb.verify_e4_claims()
    assert rep.ok
    names = {r.claim for r in rep.rows}
    assert names == {"claim-1", "claim-2", "claim-3", "claim-4", "claim-i", "claim-ii"}
    spot = [r for r in rep.rows if r.claim == "claim-1" and r.degree == (1, 8, 1)]
    assert spot and spot[0].lhs == spot[0].rhs == 1
    assert all(r.rhs == 0 for r in rep.rows if r.claim == "claim-4")


def test_e4_closed_form_report(wb):
    rep = wb.verify_e4_dimensions()
    assert rep.ok
    assert len(rep.rows) > 200


def test_survival_report(wb):
    rep = wb.survival_report()
    assert rep.ok
    named = [r for r in rep.rows if r.claim.startswith("survives-to-e4:")]
    assert [r.claim.split(":")[1] for r in named] == ["alpha", "alphap", "h(1,1)", "x(1)"]
    fates = [r for r in rep.rows if r.claim.startswith("dies:")]
    assert len(fates) > 10


# ---- patterns ----


def test_bo_pattern_placement():
    assert bo_pattern_dim(0, 0) == 1
    assert bo_pattern_dim(1, 2) == 1  # h(1,1)
    assert bo_pattern_dim(2, 4) == 1  # h(1,1)^2
    assert bo_pattern_dim(1, 3) == 1  # v1
    assert bo_pattern_dim(2, 6) == 0  # v1^2 is cut: m = 2 mod 4
    assert bo_pattern_dim(2, 7) == 0  # nothing with a = -1
    assert bo_pattern_dim(4, 12) == 1  # v1^4
    assert bo_pattern_dim(3, 7) == 1  # v1*h(1,1)^2
    assert bo_pattern_dim(3, 8) == 0  # v1^2*h(1,1) is cut: m = 2 mod 4


def test_bu_pattern_placement():
    assert bu_pattern_dim(0, 0) == 1
    assert bu_pattern_dim(1, 3) == 1
    assert bu_pattern_dim(-2, -6) == 1
    assert bu_pattern_dim(1, 2) == 0


def test_pattern_suspension():
    spec = PatternSpec("bo", suspension=(2, 9))
    assert pattern_dims(spec, 2, 9) == 1
    assert pattern_dims(spec, 3, 11) == 1
    assert pattern_dims(spec, 2, 10) == 0
    assert pattern_dims(PatternSpec("bu", suspension=(6, 27)), 7, 30) == 1


def test_pattern_kind_checked():
    with pytest.raises(GF2PolyError):
        PatternSpec("ko")


def test_adams_collapse():
    assert adams_bidegree(Multidegree(0, 0, 0)) == (0, 0)
    assert adams_bidegree(Multidegree(0, 2, 1)) == (1, 3)  # v1
    assert adams_bidegree(Multidegree(1, 2, 0)) == (1, 2)  # h(1,1)
    assert adams_bidegree(Multidegree(1, 16, 1)) == (2, 17)  # x(2)


# ---- decomposition ----


def test_low_w_monomial_possible(wb):
    assert wb.low_w_monomial_possible(Multidegree(0, 0, 0))
    assert wb.low_w_monomial_possible(Multidegree(1, 2, 0))
    assert wb.low_w_monomial_possible(Multidegree(1, 6, 0))
    # only v1^-1*h(1,1)^3 lives here and it has w = 5
    assert not wb.low_w_monomial_possible(Multidegree(3, 4, -1))
    assert not wb.low_w_monomial_possible(Multidegree(-1, 0, 0))
    assert not wb.low_w_monomial_possible(Multidegree(1, 3, 0))


def test_decomposition_report(wb):
    rep = wb.mahowald_decomposition_check()
    assert not [r for r in rep.rows if r.status == "mismatch"]
    rows = {r.degree: r for r in rep.rows}
    for cell in [(0, 0), (1, 2), (2, 4), (6, 27), (7, 30)]:
        assert rows[cell].status == "ok"
        assert rows[cell].lhs == rows[cell].rhs == 1, cell
    assert rows[(1, 3)].lhs == 1  # the bu copy of v1 itself
    # insufficiency at the window edge is reported, not dropped
    assert any(r.status == "insufficient" for r in rep.rows)


def test_decomposition_positive_quadrant_covered():
    # the full default window settles every cell with stem and filtration >= 0
    rep = Workbench(default_window(), workers=3).mahowald_decomposition_check()
    bad = [
        r.degree
        for r in rep.rows
        if r.status == "insufficient" and r.degree[0] >= 0 and r.degree[1] >= r.degree[0]
    ]
    assert bad == []


# ---- report plumbing ----


def test_report_json_shape(wb):
    rep = wb.verify_e3_presentation()
    obj = rep.to_json_obj()
    assert obj["name"] == "e3-presentation"
    assert obj["ok"] is True
    row = obj["rows"][0]
    assert set(row) == {"claim", "degree", "lhs", "rhs", "status"}


def test_report_failure_surfacing():
    from moorev1.specseq import CheckRow

    rep = Report("demo", [CheckRow("c", (0,), 1, 2, "mismatch")])
    assert not rep.ok
    assert len(rep.failures()) == 1
