"""Lorentzian instances: a form, its nef cone, an interior point and a
finite generating family for the pseudo-effective cone."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import exactlin as el
from . import forms, tropfan
from .errors import ConstructionError, InputError, NotNefError
from .forms import HomogeneousForm, PolarizedForm
from .matroid import Matroid

ZERO = el.ZERO


@dataclass(frozen=True)
class NefCertificate:
    kind: str                      # "generators" or "oracle"
    coefficients: Optional[tuple] = None
    detail: object = None


@dataclass
class FanModel:
    """Fan data behind a fan instance; vectors live in ``coords``."""
    fan: tropfan.MarkedFan
    omega: dict
    coords: tropfan.DivisorCoordinates
    ample_pl: tuple
    lorentz: Optional[forms.LorentzVerdict] = None

    def to_pl(self, x: Sequence) -> tuple:
        return self.coords.lift(x)

    def from_pl(self, phi: Sequence) -> tuple:
        return self.coords(phi)


@dataclass(eq=False)
class LorentzInstance:
    label: str
    F: PolarizedForm
    nef_generators: tuple
    interior_witness: tuple
    eff_generators: tuple            # ((label, vector), ...)
    eff_exact: bool = True
    nef_oracle: Optional[Callable] = None
    ample_oracle: Optional[Callable] = None
    fan_model: Optional[FanModel] = None
    notes: list = field(default_factory=list)
    _nef_cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.F.dim

    @property
    def degree(self) -> int:
        return self.F.degree

    @property
    def form(self) -> HomogeneousForm:
        return self.F.source

    @property
    def eff_vectors(self) -> list:
        return [v for _, v in self.eff_generators]

    @property
    def eff_labels(self) -> list:
        return [lab for lab, _ in self.eff_generators]

    # -- construction --------------------------------------------------------

    @classmethod
    def create(cls, label: str, f: HomogeneousForm, nef_generators, interior_witness,
               eff_generators, check: bool = True, lorentz: Optional[forms.LorentzVerdict] = None,
               **kw) -> "LorentzInstance":
        nef = tuple(el.vec(g) for g in nef_generators)
        omega = el.vec(interior_witness)
        eff = tuple((str(lab), el.vec(v)) for lab, v in eff_generators)
        for g in (*nef, omega, *(v for _, v in eff)):
            if len(g) != f.dim:
                raise InputError(f"vector of length {len(g)} in a {f.dim}-dimensional instance")
        inst = cls(label, forms.polarize(f), nef, omega, eff, **kw)
        if check:
            inst._check_invariants(lorentz)
        return inst

    def _check_invariants(self, lorentz=None):
        n = self.degree
        top = self.F.eval_multi([(self.interior_witness, n)])
        if top <= 0:
            raise ConstructionError("form is not positive at the interior witness",
                                    {"kind": "positivity", "value": top})
        verdict = lorentz if lorentz is not None else forms.is_c_lorentzian(self.form, self.nef_generators)
        if not verdict:
            raise ConstructionError(f"form is not Lorentzian on the nef cone: {verdict.reason}",
                                    verdict.witness)
        effs = self.eff_vectors
        for k, g in enumerate(self.nef_generators):
            if not _cone_member(effs, g):
                raise ConstructionError("nef generator outside the cone of the effective generators",
                                        {"kind": "nef-not-eff", "index": k, "vector": g})
        for lab, t in self.eff_generators:
            if n == 1:
                vals = {(): self.F(t)}
            else:
                vals = forms.polar_table(forms.polarize(self.F.partial([t])), self.nef_generators)
            bad = next(((idx, v) for idx, v in vals.items() if v < 0), None)
            if bad is not None:
                raise ConstructionError("effective generator pairs negatively with nef classes",
                                        {"kind": "pairing", "eff": lab, "nef_indices": list(bad[0]),
                                         "value": bad[1]})

    # -- nef membership ------------------------------------------------------

    def certify_nef(self, v: Sequence) -> NefCertificate:
        v = el.vec(v)
        if len(v) != self.dim:
            raise InputError(f"vector of length {len(v)} in a {self.dim}-dimensional instance")
        if v not in self._nef_cache:
            try:
                self._nef_cache[v] = self._certify(v)
            except NotNefError as exc:
                self._nef_cache[v] = exc
        got = self._nef_cache[v]
        if isinstance(got, NotNefError):
            raise got
        return got

    def _certify(self, v: tuple) -> NefCertificate:
        k = len(self.nef_generators)
        if el.is_zero(v):
            return NefCertificate("generators", el.zeros(k))
        if v in self.nef_generators:
            return NefCertificate("generators", el.unit(k, self.nef_generators.index(v)))
        if self.fan_model is not None and self.nef_oracle is not None:
            # the fan test decides nefness exactly; skip the larger generator LP
            detail = self.nef_oracle(v)
            if detail is None:
                raise NotNefError(f"class {fmt(v)} is not nef on the fan", witness={"vector": v})
            return NefCertificate("oracle", None, detail)
        coeffs = _cone_member(self.nef_generators, v)
        if coeffs is not None:
            return NefCertificate("generators", coeffs)
        if self.nef_oracle is not None:
            detail = self.nef_oracle(v)
            if detail is not None:
                return NefCertificate("oracle", None, detail)
        raise NotNefError(f"class {fmt(v)} is not certified nef", witness={"vector": v})

    def is_nef(self, v: Sequence) -> bool:
        try:
            self.certify_nef(v)
            return True
        except NotNefError:
            return False

    def require_nef(self, v: Sequence) -> tuple:
        self.certify_nef(v)
        return el.vec(v)

    def combination(self, coeffs: Sequence) -> tuple:
        """Nonnegative combination of nef generators (certified by construction)."""
        coeffs = el.vec(coeffs)
        if len(coeffs) != len(self.nef_generators) or any(c < 0 for c in coeffs):
            raise InputError("need one nonnegative coefficient per nef generator")
        return el.lincomb(coeffs, self.nef_generators, self.dim)

    def is_interior(self, v: Sequence) -> bool:
        """Strictly positive combination of the nef generators, or ample by the oracle."""
        v = el.vec(v)
        key = ("interior", v)
        if key not in self._nef_cache:
            self._nef_cache[key] = self._interior(v)
        return self._nef_cache[key]

    def _interior(self, v: tuple) -> bool:
        if self.fan_model is not None and self.ample_oracle is not None:
            return bool(self.ample_oracle(v))
        k = len(self.nef_generators)
        cons = [(row, "==", x) for row, x in zip(el.transpose(self.nef_generators), v)]
        cons += [(el.unit(k, j), ">", 0) for j in range(k)]
        if el.lp_feasible(cons, k):
            return True
        if self.ample_oracle is not None:
            return bool(self.ample_oracle(v))
        return False

    def eff_membership(self, v: Sequence) -> Optional[tuple]:
        return _cone_member(self.eff_vectors, v)

    def describe(self) -> dict:
        return {
            "label": self.label,
            "dim": self.dim,
            "degree": self.degree,
            "nef_generators": len(self.nef_generators),
            "eff_generators": len(self.eff_generators),
            "eff_exact": self.eff_exact,
        }

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "form": self.form.to_json(),
            "nef_generators": [[str(x) for x in g] for g in self.nef_generators],
            "interior_witness": [str(x) for x in self.interior_witness],
            "eff_generators": [{"label": lab, "vec": [str(x) for x in v]} for lab, v in self.eff_generators],
        }


def _cone_member(gens: Sequence[Sequence], v: Sequence) -> Optional[tuple]:
    """Nonnegative coefficients expressing ``v`` over ``gens``, or None."""
    v = el.vec(v)
    k = len(gens)
    if k == 0:
        return () if el.is_zero(v) else None
    for j, g in enumerate(gens):
        if g == v:
            return tuple(el.ONE if i == j else ZERO for i in range(k))
    cons = [(row, "==", x) for row, x in zip(el.transpose(gens), v)]
    cons += [(el.unit(k, j), ">=", 0) for j in range(k)]
    res = el.lp_feasible(cons, k)
    return res.witness if res else None


def fmt(v: Sequence) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


# -- collections -------------------------------------------------------------

@dataclass
class NefCollection:
    instance: LorentzInstance
    classes: tuple
    certificates: tuple

    @classmethod
    def create(cls, instance: LorentzInstance, classes: Sequence[Sequence],
               certificates: Optional[Sequence[NefCertificate]] = None) -> "NefCollection":
        vs = tuple(el.vec(c) for c in classes)
        if len(vs) > instance.degree:
            raise InputError(f"collection of {len(vs)} classes exceeds degree {instance.degree}")
        if certificates is None:
            certs = tuple(instance.certify_nef(v) for v in vs)
        else:
            certs = tuple(certificates)
            for v, c in zip(vs, certs):
                if c.kind == "generators":
                    if el.lincomb(c.coefficients, instance.nef_generators, instance.dim) != v \
                            or any(x < 0 for x in c.coefficients):
                        raise NotNefError(f"certificate does not reproduce {fmt(v)}")
        return cls(instance, vs, certs)

    @classmethod
    def from_combinations(cls, instance: LorentzInstance, coeff_rows) -> "NefCollection":
        vs, certs = [], []
        for row in coeff_rows:
            row = el.vec(row)
            vs.append(instance.combination(row))
            certs.append(NefCertificate("generators", row))
        return cls.create(instance, vs, certs)

    @property
    def m(self) -> int:
        return len(self.classes)

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, i):
        return self.classes[i]

    def subset_sum(self, subset: Sequence[int]) -> tuple:
        out = el.zeros(self.instance.dim)
        for i in subset:
            out = el.add(out, self.classes[i])
        return out

    def without(self, r: int) -> list:
        return [c for i, c in enumerate(self.classes) if i != r]


# -- builders ----------------------------------------------------------------

def build_diagonal_torus(d: int) -> LorentzInstance:
    """``f = x_1 ... x_d`` on the positive orthant."""
    if not isinstance(d, int) or d < 2:
        raise InputError("diagonal torus needs d >= 2")
    f = HomogeneousForm.monomial((1,) * d)
    units = [el.unit(d, i) for i in range(d)]
    eff = [(f"e{i + 1}", u) for i, u in enumerate(units)]
    return LorentzInstance.create(f"diagonal-torus-{d}", f, units, (el.ONE,) * d, eff)


def sym_pairs(d: int) -> list:
    """Coordinate order for symmetric matrices: diagonal first, then ``i < j``."""
    return [(i, i) for i in range(d)] + [(i, j) for i in range(d) for j in range(i + 1, d)]


def sym_coords(mat: Sequence[Sequence]) -> tuple:
    d = len(mat)
    return tuple(el.Q(mat[i][j]) for i, j in sym_pairs(d))


def sym_matrix(x: Sequence, d: int) -> list:
    m = [[ZERO] * d for _ in range(d)]
    for (i, j), a in zip(sym_pairs(d), x):
        m[i][j] = m[j][i] = el.Q(a)
    return m


def _perm_sign(p) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def determinant_form(d: int) -> HomogeneousForm:
    """``det`` of a symmetric matrix, by permutation expansion."""
    pairs = sym_pairs(d)
    pos = {pr: k for k, pr in enumerate(pairs)}
    s = len(pairs)
    coeffs: dict = {}
    for p in itertools.permutations(range(d)):
        exp = [0] * s
        for i in range(d):
            exp[pos[(min(i, p[i]), max(i, p[i]))]] += 1
        key = tuple(exp)
        coeffs[key] = coeffs.get(key, ZERO) + _perm_sign(p)
    return HomogeneousForm(s, d, coeffs)


def build_symmetric_torus(d: int) -> LorentzInstance:
    """Determinant on real symmetric ``d x d`` matrices with a rank-one nef family."""
    if not isinstance(d, int) or d < 2:
        raise InputError("symmetric torus needs d >= 2")
    f = determinant_form(d)
    family, labels = [], []
    for i in range(d):
        v = [ZERO] * d
        v[i] = el.ONE
        family.append(v)
        labels.append(f"E{i + 1}{i + 1}")
    for i in range(d):
        for j in range(i + 1, d):
            for sign, tag in ((1, "+"), (-1, "-")):
                v = [ZERO] * d
                v[i], v[j] = el.ONE, el.Q(sign)
                family.append(v)
                labels.append(f"R{i + 1}{j + 1}{tag}")
    gens = [sym_coords([[a * b for b in v] for a in v]) for v in family]
    omega = sym_coords([[el.ONE if i == j else ZERO for j in range(d)] for i in range(d)])

    def psd(x):
        sig = el.signature(sym_matrix(x, d))
        return {"kind": "psd", "signature": list(sig)} if sig[1] == 0 else None

    def pd(x):
        return el.signature(sym_matrix(x, d))[0] == d

    inst = LorentzInstance.create(f"symmetric-torus-{d}", f, gens, omega, list(zip(labels, gens)),
                                  eff_exact=False, nef_oracle=psd, ample_oracle=pd)
    inst.notes.append("effective generators are a finite rank-one family inside the PSD cone; "
                      "dual checks against them are necessary conditions only")
    return inst


def build_from_fan(fan: tropfan.MarkedFan, omega: dict, eff_labels: Optional[dict] = None,
                   extra_nef: Sequence[Sequence] = (), hints: Sequence[Sequence] = (),
                   lorentz: Optional[forms.LorentzVerdict] = None, validate: bool = True,
                   label: str = "fan") -> LorentzInstance:
    """Instance on the divisor classes of a Lorentzian fan.

    ``extra_nef`` and ``hints`` are PL vectors (values per ray).  Nef
    generators: an ample class with its perturbations, every ``D_rho`` that
    is nef, and each extra class that passes the nef test.
    """
    if validate:
        v = tropfan.validate(fan)
        if not v:
            raise ConstructionError(f"invalid fan: {v.kind}", v.witness)
    b = tropfan.check_balanced(fan, omega)
    if not b:
        raise ConstructionError("weights are not balanced", b.witness)
    if lorentz is None:
        lorentz = tropfan.lorentzian_fan_check(fan, omega, hints)
    if not lorentz:
        raise ConstructionError(f"fan is not Lorentzian: {lorentz.reason}", lorentz.witness)
    found = tropfan.find_ample_class(fan, hints)
    if found is None:
        raise ConstructionError("no ample class found")
    ample, wit = found
    coords = tropfan.DivisorCoordinates(fan)
    vol = tropfan.volume_form(fan, omega, coords)
    _, family = tropfan.ample_family(fan, ample, wit)
    gens = [coords(p) for p, _ in family]
    boundary = []
    for rid in fan.rays:
        phi = fan.indicator(rid)
        if tropfan.is_nef(fan, phi):
            boundary.append(coords(phi))
    for k, phi in enumerate(extra_nef):
        phi = el.vec(phi)
        if not tropfan.is_nef(fan, phi):
            raise ConstructionError("extra nef class fails the nef test", {"index": k})
        boundary.append(coords(phi))
    for g in boundary:
        if g not in gens:
            gens.append(g)
    labels = eff_labels or {}
    eff = [(labels.get(rid, f"D_{rid}"), coords.ray_class(rid)) for rid in fan.rays]
    model = FanModel(fan, omega, coords, ample, lorentz)

    def nef_oracle(x):
        res = tropfan.is_nef(fan, coords.lift(x))
        return {"kind": "fan-nef", "cones": len(res.witnesses)} if res else None

    def ample_oracle(x):
        return bool(tropfan.is_ample(fan, coords.lift(x)))

    inst = LorentzInstance.create(label, vol, gens, coords(ample), eff,
                                  lorentz=lorentz, nef_oracle=nef_oracle,
                                  ample_oracle=ample_oracle, fan_model=model)
    return inst


def build_bergman(matroid, extra_nef: Sequence[Sequence] = (), label: Optional[str] = None,
                  validate: bool = True) -> LorentzInstance:
    fan, omega = tropfan.bergman(matroid)
    label = label or f"bergman-{matroid.r}-{matroid.n}"
    return build_from_fan(fan, omega, extra_nef=extra_nef, validate=validate, label=label)


# -- file input --------------------------------------------------------------

def _vector(obj, where: str, dim: Optional[int] = None) -> tuple:
    if not isinstance(obj, list):
        raise InputError("expected a list of rationals", where)
    try:
        v = tuple(forms.parse_scalar(x) for x in obj)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad entry ({exc})", where) from None
    if dim is not None and len(v) != dim:
        raise InputError(f"expected {dim} entries, got {len(v)}", where)
    return v


def build_explicit(form_obj, generators_obj, label: str = "explicit") -> LorentzInstance:
    """Instance from a form object and a generator object (the instance file
    fields other than ``form``)."""
    f = HomogeneousForm.from_json(form_obj)
    if not isinstance(generators_obj, dict):
        raise InputError("generator data must be a JSON object")
    for key in ("nef_generators", "interior_witness", "eff_generators"):
        if key not in generators_obj:
            raise InputError("missing field", key)
    nef = [_vector(g, f"nef_generators[{k}]", f.dim) for k, g in enumerate(generators_obj["nef_generators"])]
    omega = _vector(generators_obj["interior_witness"], "interior_witness", f.dim)
    eff = []
    for k, e in enumerate(generators_obj["eff_generators"]):
        if not isinstance(e, dict) or "vec" not in e:
            raise InputError("needs 'label' and 'vec'", f"eff_generators[{k}]")
        eff.append((str(e.get("label", f"D{k + 1}")), _vector(e["vec"], f"eff_generators[{k}].vec", f.dim)))
    if not nef:
        raise InputError("at least one nef generator required", "nef_generators")
    try:
        return LorentzInstance.create(generators_obj.get("label", label), f, nef, omega, eff)
    except InputError as exc:
        raise ConstructionError(str(exc)) from None


def load_instance(obj) -> LorentzInstance:
    """Instance from JSON data: an explicit instance file or a builtin model.

    Builtins: ``{"diagonal_torus": d}``, ``{"symmetric_torus": d}``,
    ``{"bergman": <matroid>, "extra_nef": [...]}``, ``{"fan": <fan file>}``.
    """
    if not isinstance(obj, dict):
        raise InputError("instance must be a JSON object")
    if "diagonal_torus" in obj:
        return build_diagonal_torus(_int(obj["diagonal_torus"], "diagonal_torus"))
    if "symmetric_torus" in obj:
        return build_symmetric_torus(_int(obj["symmetric_torus"], "symmetric_torus"))
    if "bergman" in obj:
        m = Matroid.from_json(obj["bergman"])
        fan, _ = tropfan.bergman(m)
        extra = [_vector(v, f"extra_nef[{k}]", len(fan.rays)) for k, v in enumerate(obj.get("extra_nef", []))]
        return build_bergman(m, extra, validate=False)
    if "fan" in obj:
        fan, omega = tropfan.MarkedFan.from_json(obj["fan"])
        extra = [_vector(v, f"extra_nef[{k}]", len(fan.rays)) for k, v in enumerate(obj.get("extra_nef", []))]
        return build_from_fan(fan, omega, extra_nef=extra, label=obj.get("label", "fan"))
    if "form" not in obj:
        raise InputError("missing field", "form")
    return build_explicit(obj["form"], obj, obj.get("label", "explicit"))


def _int(x, where):
    if not isinstance(x, int) or isinstance(x, bool):
        raise InputError("expected an integer", where)
    return x

