import itertools
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgekit import exactlin as el
from hodgekit import forms
from hodgekit.errors import InputError
from hodgekit.forms import HomogeneousForm, polarize

Q = el.Q
V = el.vec
DT3 = HomogeneousForm.monomial([1, 1, 1])
DT4 = HomogeneousForm.monomial([1, 1, 1, 1])


def polar_oracle(f, vectors):
    """Inclusion-exclusion polarization: (1/n!) sum_S (-1)^(n-|S|) f(sum_{i in S} v_i)."""
    n = len(vectors)
    total = Q(0)
    for k in range(n + 1):
        for s in itertools.combinations(vectors, k):
            point = el.lincomb([1] * k, s, dim=f.dim) if s else el.zeros(f.dim)
            total += (-1) ** (n - k) * f(point)
    return total / factorial(n)


def m_convex_oracle(support):
    pts = {tuple(p) for p in support}
    for a, b in itertools.product(pts, repeat=2):
        for i in range(len(a)):
            if a[i] <= b[i]:
                continue
            ok = False
            for j in range(len(a)):
                if a[j] < b[j]:
                    c = list(a)
                    c[i] -= 1
                    c[j] += 1
                    ok = ok or tuple(c) in pts
            if not ok:
                return False
    return True


@st.composite
def small_forms(draw, dim=3, degree=3):
    exps = [e for e in itertools.product(range(degree + 1), repeat=dim) if sum(e) == degree]
    chosen = draw(st.lists(st.sampled_from(exps), min_size=1, max_size=5, unique=True))
    coefs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(chosen), max_size=len(chosen)))
    return HomogeneousForm(dim, degree, dict(zip(chosen, coefs)))


vec3 = st.lists(st.integers(-3, 3), min_size=3, max_size=3).map(V)


# -- examples ---------------------------------------------------------------

def test_polarization_examples():
    F = polarize(DT3)
    e = [el.unit(3, i) for i in range(3)]
    assert F(*e) == Q(1) / 6
    assert F(V((1, 2, 3)), V((1, 2, 3)), V((1, 2, 3))) == 6
    cube = polarize(HomogeneousForm.monomial([3]))
    assert cube(V((2,)), V((3,)), V((5,))) == 30


def test_polarization_rejects_degree_zero():
    with pytest.raises(InputError):
        polarize(HomogeneousForm(2, 0, {(0, 0): 1}))


def test_eval_multi_examples():
    F = polarize(DT3)
    L, w = V((1, 1, 0)), V((1, 1, 1))
    assert F.eval_multi([(L, 2), (w, 1)]) == Q(1) / 3
    assert F.eval_multi([(L, 3)]) == 0
    F4 = polarize(DT4)
    assert F4.eval_multi([(V((1, 1, 1, 0)), 2), (el.unit(4, 3), 1), (el.unit(4, 0), 1)]) == Q(1) / 12


def test_eval_multi_bad_multiplicity():
    F = polarize(DT3)
    with pytest.raises(InputError):
        F.eval_multi([(V((1, 1, 1)), 2)])


def test_quad_form_examples():
    F = polarize(DT3)
    q = F.quad_form([V((1, 1, 1))])
    assert q == [[Q(int(i != j)) / 6 for j in range(3)] for i in range(3)]
    assert el.signature(q) == (1, 2, 0)
    q3 = F.quad_form([el.unit(3, 2)])
    assert q3[0][1] == q3[1][0] == Q(1) / 6
    assert sum(x != 0 for row in q3 for x in row) == 2
    assert el.signature(q3) == (1, 1, 1)
    hyp = HomogeneousForm(2, 2, {(2, 0): 1, (0, 2): -1})
    assert polarize(hyp).quad_form([]) == [[1, 0], [0, -1]]


def test_af_check_examples():
    F = polarize(DT3)
    w = V((1, 1, 1))
    res = forms.af_check(F, w, V((1, 1, 0)), [w])
    assert res.holds and res.gap == Q(1) / 9
    assert forms.af_check(F, V((1, 2, 0)), V((1, 2, 0)), [w]).gap == 0
    assert forms.af_check(F, V((2, 2, 0)), V((1, 1, 0)), [w]).gap == 0


def test_m_convex_examples():
    assert forms.m_convex([(1, 1, 0), (0, 1, 1), (1, 0, 1)]) == (True, None)
    ok, wit = forms.m_convex([(2, 0), (0, 2)])
    assert not ok and wit == ((2, 0), (0, 2), 1)
    assert forms.m_convex([(3, 0, 1)])[0]


def test_orthant_examples():
    e2 = HomogeneousForm.from_terms(3, 2, [((1, 1, 0), 1), ((0, 1, 1), 1), ((1, 0, 1), 1)])
    assert forms.is_lorentzian_orthant(e2)
    sq = HomogeneousForm(2, 2, {(2, 0): 1, (0, 2): 1})
    bad = forms.is_lorentzian_orthant(sq)
    assert not bad and bad.witness["signature"] == [2, 0, 0]
    assert forms.is_lorentzian_orthant(HomogeneousForm(2, 2, {(2, 0): 1, (1, 1): 2, (0, 2): 1}))
    neg = forms.is_lorentzian_orthant(HomogeneousForm(2, 2, {(1, 1): -1}))
    assert not neg and neg.witness["kind"] == "coefficient"


def test_cone_examples():
    e = [el.unit(3, i) for i in range(3)]
    assert forms.is_c_lorentzian(DT3, e)
    assert forms.is_c_lorentzian(DT3, e + [V((1, 1, 1))])
    bad = forms.is_c_lorentzian(DT3, [e[0], e[1], V((0, 0, -1))])
    assert not bad and bad.witness["kind"] == "positivity" and bad.witness["value"] < 0


def test_from_json_pointer():
    with pytest.raises(InputError) as exc:
        HomogeneousForm.from_json({"dim": 2, "degree": 2, "terms": [{"exp": [1, "a"], "coef": 1}]})
    assert "form.terms[0].exp" in str(exc.value)
    f = HomogeneousForm.from_json({"dim": 2, "degree": 2, "terms": [{"exp": [1, 1], "coef": "1/2"}]})
    assert HomogeneousForm.from_json(f.to_json()).coeffs == f.coeffs == {(1, 1): Q(1) / 2}


# -- properties -------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(small_forms(), vec3, vec3, vec3)
def test_polarization_matches_oracle(f, a, b, c):
    assert polarize(f)(a, b, c) == polar_oracle(f, [a, b, c])


@settings(max_examples=100, deadline=None)
@given(small_forms(), vec3, vec3, vec3, vec3, st.integers(-3, 3))
def test_polarization_symmetric_multilinear(f, a, b, c, d, t):
    F = polarize(f)
    base = F(a, b, c)
    for p in itertools.permutations([a, b, c]):
        assert F(*p) == base
    assert F(el.add(a, el.scale(t, d)), b, c) == base + t * F(d, b, c)
    assert F(a, a, a) == f(a)


@settings(max_examples=60, deadline=None)
@given(small_forms(), vec3, vec3)
def test_mixed_sequence_matches_eval(f, v, w):
    F = polarize(f)
    seq = F.mixed_sequence(v, w)
    assert seq == [F.eval_multi([(v, k), (w, 3 - k)]) for k in range(4)]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([e for e in itertools.product(range(4), repeat=3) if sum(e) == 3]),
                min_size=1, max_size=7))
def test_m_convex_matches_oracle(support):
    ok, wit = forms.m_convex(support)
    assert ok == m_convex_oracle(support)
    if not ok:
        a, b, i = wit
        assert a[i - 1] > b[i - 1]


@settings(max_examples=60, deadline=None)
@given(small_forms(dim=3, degree=2).filter(lambda f: all(c > 0 for c in f.coeffs.values())))
def test_orthant_verdict_witness_rechecks(f):
    res = forms.is_lorentzian_orthant(f)
    if not res and res.witness["kind"] == "hessian":
        assert el.signature(res.witness["matrix"])[0] > 1
    if not res and res.witness["kind"] == "support":
        assert not m_convex_oracle(f.coeffs)


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(4)), st.lists(st.integers(1, 4), min_size=4, max_size=4))
def test_cone_verdict_invariant_under_permutation_and_scaling(perm, scales):
    gens = [el.unit(3, 0), el.unit(3, 1), el.unit(3, 2), V((1, 1, 1))]
    moved = [el.scale(scales[k], gens[p]) for k, p in enumerate(perm)]
    assert bool(forms.is_c_lorentzian(DT3, moved)) == bool(forms.is_c_lorentzian(DT3, gens)) is True
    sq = HomogeneousForm(2, 2, {(2, 0): 1, (0, 2): 1})
    two = [el.unit(2, 0), el.unit(2, 1)]
    assert not forms.is_c_lorentzian(sq, [el.scale(scales[k], two[k % 2]) for k in range(2)][::-1])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 3), min_size=4, max_size=4), min_size=4, max_size=4))
def test_hodge_index_signature_on_cone(rows):
    # e2 + x4-weighted form: Lorentzian on the orthant; contexts come from the cone
    f = HomogeneousForm.from_terms(4, 3, [((1, 1, 1, 0), 1), ((1, 1, 0, 1), 1), ((0, 1, 1, 1), 2)])
    gens = [el.unit(4, i) for i in range(4)]
    assert forms.is_c_lorentzian(f, gens)
    F = polarize(f)
    v1, v2, rest = V(rows[0]), V(rows[1]), V(rows[2])
    q = F.quad_form([rest])
    padded = F(rest, V((1, 1, 1, 1)), V((1, 1, 1, 1)))
    if padded > 0:
        assert el.signature(q)[0] == 1
    assert forms.af_check(F, v1, v2, [rest]).gap >= 0
