import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgekit import exactlin as el
from hodgekit import tropfan
from hodgekit.errors import ConstructionError, InputError, NotNefError
from hodgekit.instance import (NefCollection, build_bergman, build_diagonal_torus, build_explicit,
                               build_from_fan, build_symmetric_torus, load_instance, sym_coords)
from hodgekit.matroid import Matroid

Q = el.Q
V = el.vec


def diag(entries):
    d = len(entries)
    return sym_coords([[entries[i] if i == j else 0 for j in range(d)] for i in range(d)])


def test_diagonal_torus(dt3, dt4):
    e = [el.unit(3, i) for i in range(3)]
    assert dt3.F(*e) == Q(1) / 6 >= 0
    assert dt3.dim == dt3.degree == 3 and dt3.interior_witness == V((1, 1, 1))
    assert dt3.eff_labels == ["e1", "e2", "e3"]
    L = V((1, 1, 1, 0))
    assert dt4.F(L, L, el.unit(4, 3), el.unit(4, 0)) == Q(1) / 12
    with pytest.raises(InputError):
        build_diagonal_torus(1)


def test_symmetric_torus_d2():
    sym2 = build_symmetric_torus(2)
    eye = diag([1, 1])
    assert sym2.F(eye, eye) == 1
    assert sym2.F(diag([1, 0]), diag([0, 1])) == Q(1) / 2
    assert len(sym2.nef_generators) == 4 and not sym2.eff_exact


def test_symmetric_nef_oracle(sym3):
    assert sym3.is_nef(diag([1, 2, 0]))
    with pytest.raises(NotNefError):
        sym3.certify_nef(diag([1, -1, 1]))
    assert sym3.is_interior(diag([1, 2, 3])) and not sym3.is_interior(diag([1, 2, 0]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_symmetric_restricts_to_diagonal(rows):
    sym, dg = build_symmetric_torus(3), build_diagonal_torus(3)
    assert sym.F(*[diag(r) for r in rows]) == dg.F(*[V(r) for r in rows])


def test_bergman_u23():
    inst = build_bergman(Matroid.uniform(2, 3))
    assert inst.dim == 1 and inst.degree == 1
    coords = inst.fan_model.coords
    d1, d2 = coords.ray_class("F1"), coords.ray_class("F2")
    assert inst.F(d1) == inst.F(d2) == 1


def test_bergman_u45(u45):
    model = u45.fan_model
    total = model.from_pl(tuple(el.ONE for _ in model.fan.rays))
    assert u45.degree == 3 and u45.F(total, total, total) > 0
    assert u45.is_nef(total) and not u45.is_interior(total)
    assert u45.is_interior(u45.interior_witness)


def test_nef_certificates(dt3):
    cert = dt3.certify_nef(V((2, 0, 1)))
    assert cert.kind == "generators" and el.lincomb(cert.coefficients, dt3.nef_generators) == V((2, 0, 1))
    with pytest.raises(NotNefError):
        dt3.certify_nef(V((1, -1, 0)))
    with pytest.raises(InputError):
        dt3.certify_nef(V((1, 1)))


def test_collection(dt3):
    coll = NefCollection.create(dt3, [V((1, 1, 0)), V((0, 0, 1))])
    assert coll.m == 2 and coll.subset_sum([0, 1]) == V((1, 1, 1))
    with pytest.raises(InputError):
        NefCollection.create(dt3, [V((1, 1, 1))] * 4)
    with pytest.raises(NotNefError):
        NefCollection.create(dt3, [V((1, -1, 0))])


DT3_FORM = {"dim": 3, "degree": 3, "terms": [{"exp": [1, 1, 1], "coef": 1}]}
UNITS = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_explicit_round_trip(dt3):
    gens = {"nef_generators": UNITS, "interior_witness": [1, 1, 1],
            "eff_generators": [{"label": f"e{i + 1}", "vec": u} for i, u in enumerate(UNITS)]}
    inst = build_explicit(DT3_FORM, gens)
    assert inst.F(*[V(u) for u in UNITS]) == dt3.F(*[V(u) for u in UNITS])
    again = load_instance(inst.to_json())
    assert again.form.coeffs == inst.form.coeffs and again.nef_generators == inst.nef_generators


def test_explicit_nef_outside_eff():
    gens = {"nef_generators": UNITS, "interior_witness": [1, 1, 1],
            "eff_generators": [{"vec": [1, 0, 0]}, {"vec": [0, 1, 0]}]}
    with pytest.raises(ConstructionError) as exc:
        build_explicit(DT3_FORM, gens)
    assert exc.value.witness["kind"] == "nef-not-eff"


def test_explicit_not_lorentzian():
    form = {"dim": 2, "degree": 2, "terms": [{"exp": [2, 0], "coef": 1}, {"exp": [0, 2], "coef": 1}]}
    gens = {"nef_generators": [[1, 0], [0, 1]], "interior_witness": [1, 1],
            "eff_generators": [{"vec": [1, 0]}, {"vec": [0, 1]}]}
    with pytest.raises(ConstructionError) as exc:
        build_explicit(form, gens)
    wit = exc.value.witness
    assert wit["kind"] == "hessian" and wit["signature"] == [2, 0, 0]
    assert el.signature(wit["matrix"])[0] == 2


def test_explicit_negative_pairing():
    # x1 x2 on the orthant with an effective class pairing negatively with e1
    form = {"dim": 2, "degree": 2, "terms": [{"exp": [1, 1], "coef": 1}]}
    gens = {"nef_generators": [[1, 0], [0, 1]], "interior_witness": [1, 1],
            "eff_generators": [{"vec": [1, 0]}, {"vec": [0, 1]}, {"label": "T", "vec": [1, -1]}]}
    with pytest.raises(ConstructionError) as exc:
        build_explicit(form, gens)
    assert exc.value.witness["kind"] == "pairing" and exc.value.witness["eff"] == "T"


def test_load_instance_errors():
    with pytest.raises(InputError):
        load_instance([])
    with pytest.raises(InputError) as exc:
        load_instance({"form": DT3_FORM, "nef_generators": [[1, 0]], "interior_witness": [1, 1, 1],
                       "eff_generators": []})
    assert "nef_generators[0]" in str(exc.value)
    assert load_instance({"diagonal_torus": 3}).label == "diagonal-torus-3"


def test_fan_not_lorentzian_rejected():
    fan, omega = tropfan.bergman(Matroid.uniform(2, 3))
    skew = dict(omega)
    skew[(0,)] = Q(2)
    with pytest.raises(ConstructionError):
        build_from_fan(fan, skew)


def test_fan_instance_matches_tropical_degree(u45, rng):
    model = u45.fan_model
    fan, omega, coords = model.fan, model.omega, model.coords
    for _ in range(200):
        rays = [rng.choice(fan.rays) for _ in range(3)]
        direct = tropfan.degree(fan, omega, [fan.indicator(r) for r in rays], check=False)
        assert u45.F(*[coords.ray_class(r) for r in rays]) == direct
