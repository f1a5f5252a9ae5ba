"""Homogeneous forms, complete polarization and Lorentzian tests.

A form is a sparse map from exponent vectors to rationals.  Its complete
polarization ``F`` is the symmetric multilinear form with ``F(v,...,v) = f(v)``.
``F`` is evaluated by restricting ``f`` to the span of the distinct
arguments and reading off one coefficient, and partially applied through
directional derivatives.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from gmpy2 import mpq

from . import exactlin as el
from .errors import InputError

ZERO = el.ZERO


_FACT = [factorial(k) for k in range(64)]


def _fact_prod(exps: Iterable[int]) -> int:
    out = 1
    for e in exps:
        if e > 1:
            out *= _FACT[e] if e < 64 else factorial(e)
    return out


def _poly_mul(p: dict, q: dict, cap: Optional[tuple] = None) -> dict:
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            e = tuple(i + j for i, j in zip(a, b))
            if cap is not None and any(i > c for i, c in zip(e, cap)):
                continue
            out[e] = out.get(e, ZERO) + x * y
    return {e: c for e, c in out.items() if c != 0}


@dataclass(frozen=True, eq=False)
class HomogeneousForm:
    dim: int
    degree: int
    coeffs: Mapping[tuple, mpq]

    def __post_init__(self):
        clean = {}
        for exp, c in self.coeffs.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.dim:
                raise InputError(f"exponent {exp} has length {len(exp)}, expected {self.dim}")
            if any(e < 0 for e in exp):
                raise InputError(f"negative exponent in {exp}")
            if sum(exp) != self.degree:
                raise InputError(f"exponent {exp} does not sum to degree {self.degree}")
            c = el.Q(c)
            if c != 0:
                clean[exp] = clean.get(exp, ZERO) + c
        object.__setattr__(self, "coeffs", {e: c for e, c in sorted(clean.items()) if c != 0})

    @classmethod
    def _trusted(cls, dim: int, degree: int, coeffs: dict) -> "HomogeneousForm":
        """Skip validation for coefficient maps built internally."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "dim", dim)
        object.__setattr__(obj, "degree", degree)
        object.__setattr__(obj, "coeffs", {e: c for e, c in sorted(coeffs.items()) if c != 0})
        return obj

    # -- construction --------------------------------------------------------

    @classmethod
    def from_terms(cls, dim: int, degree: int, terms: Iterable[tuple]) -> "HomogeneousForm":
        acc: dict = {}
        for exp, c in terms:
            exp = tuple(exp)
            acc[exp] = acc.get(exp, ZERO) + el.Q(c)
        return cls(dim, degree, acc)

    @classmethod
    def monomial(cls, exp: Sequence[int], coef=1) -> "HomogeneousForm":
        return cls(len(exp), sum(exp), {tuple(exp): el.Q(coef)})

    @classmethod
    def from_json(cls, obj) -> "HomogeneousForm":
        if not isinstance(obj, dict):
            raise InputError("form must be a JSON object", "form")
        for key in ("dim", "degree", "terms"):
            if key not in obj:
                raise InputError("missing field", f"form.{key}")
        dim, degree = obj["dim"], obj["degree"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise InputError("must be a positive integer", "form.dim")
        if not isinstance(degree, int) or isinstance(degree, bool) or degree < 0:
            raise InputError("must be a nonnegative integer", "form.degree")
        if not isinstance(obj["terms"], list):
            raise InputError("must be a list", "form.terms")
        acc: dict = {}
        for k, term in enumerate(obj["terms"]):
            where = f"form.terms[{k}]"
            if not isinstance(term, dict) or "exp" not in term or "coef" not in term:
                raise InputError("term needs 'exp' and 'coef'", where)
            exp = term["exp"]
            if (not isinstance(exp, list) or len(exp) != dim
                    or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exp)):
                raise InputError(f"exponent must be {dim} nonnegative integers", where + ".exp")
            if sum(exp) != degree:
                raise InputError(f"exponent sums to {sum(exp)}, degree is {degree}", where + ".exp")
            try:
                c = parse_scalar(term["coef"])
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise InputError(f"bad coefficient ({exc})", where + ".coef") from None
            acc[tuple(exp)] = acc.get(tuple(exp), ZERO) + c
        return cls(dim, degree, acc)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in self.coeffs.items()],
        }

    # -- algebra -------------------------------------------------------------

    def __call__(self, v: Sequence) -> mpq:
        return self.evaluate(v)

    def evaluate(self, v: Sequence) -> mpq:
        v = el.vec(v)
        self._check_vec(v)
        total = ZERO
        for exp, c in self.coeffs.items():
            term = c
            for x, e in zip(v, exp):
                if e:
                    term *= x ** e
                    if term == 0:
                        break
            total += term
        return total

    def _check_vec(self, v):
        if len(v) != self.dim:
            raise InputError(f"vector of length {len(v)} for a form in {self.dim} variables")

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> list:
        return list(self.coeffs)

    def derivative(self, v: Sequence) -> "HomogeneousForm":
        """Directional derivative ``D_v f``."""
        if self.degree == 0:
            return HomogeneousForm._trusted(self.dim, 0, {})
        v = el.vec(v)
        self._check_vec(v)
        nz = [(i, x) for i, x in enumerate(v) if x != 0]
        out: dict = {}
        for exp, c in self.coeffs.items():
            for i, x in nz:
                a = exp[i]
                if a:
                    e = exp[:i] + (a - 1,) + exp[i + 1:]
                    out[e] = out.get(e, ZERO) + c * a * x
        return HomogeneousForm._trusted(self.dim, self.degree - 1, out)

    def partial(self, exp: Sequence[int]) -> "HomogeneousForm":
        """Coordinate partial derivative ``d^exp f``."""
        k = sum(exp)
        out = {}
        for e, c in self.coeffs.items():
            if all(a >= b for a, b in zip(e, exp)):
                coef = c
                for a, b in zip(e, exp):
                    for t in range(b):
                        coef *= a - t
                out[tuple(a - b for a, b in zip(e, exp))] = coef
        return HomogeneousForm._trusted(self.dim, self.degree - k, out)

    def gram(self) -> list:
        """Symmetric matrix ``G`` of a quadratic form, ``f(x) = x^T G x``."""
        if self.degree != 2:
            raise InputError("gram matrix needs a quadratic form")
        s = self.dim
        g = [[ZERO] * s for _ in range(s)]
        half = mpq(1, 2)
        for exp, c in self.coeffs.items():
            idx = [i for i, e in enumerate(exp) if e]
            if len(idx) == 1:
                g[idx[0]][idx[0]] += c
            else:
                i, j = idx
                g[i][j] += c * half
                g[j][i] += c * half
        return g

    def linear_coefficients(self) -> tuple:
        if self.degree != 1:
            raise InputError("linear coefficients need a degree-1 form")
        out = [ZERO] * self.dim
        for exp, c in self.coeffs.items():
            out[exp.index(1)] = c
        return tuple(out)

    def restrict(self, vectors: Sequence[Sequence], cap: Optional[tuple] = None) -> dict:
        """Expand ``f(t_1 w_1 + ... + t_d w_d)`` as a polynomial in ``t``.

        Monomials whose exponent exceeds ``cap`` in some slot are dropped
        early; they cannot contribute to coefficients at or below ``cap``.
        """
        ws = [el.vec(w) for w in vectors]
        for w in ws:
            self._check_vec(w)
        d = len(ws)
        lin = []
        for i in range(self.dim):
            lin.append({tuple(1 if k == j else 0 for k in range(d)): ws[j][i]
                        for j in range(d) if ws[j][i] != 0})
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                if e == 0:
                    powers[key] = {(0,) * d: el.ONE}
                else:
                    powers[key] = _poly_mul(power(i, e - 1), lin[i], cap)
            return powers[key]

        out: dict = {}
        for exp, c in self.coeffs.items():
            prod = {(0,) * d: c}
            for i, e in enumerate(exp):
                if e:
                    prod = _poly_mul(prod, power(i, e), cap)
                    if not prod:
                        break
            for m, x in prod.items():
                out[m] = out.get(m, ZERO) + x
        return {m: x for m, x in out.items() if x != 0}

    def pullback(self, generators: Sequence[Sequence]) -> "HomogeneousForm":
        """``g(y) = f(sum_j y_j u_j)`` via the polarization table."""
        table = polar_table(polarize(self), generators)
        return form_from_polar_table(len(generators), self.degree, table)


def parse_scalar(x) -> mpq:
    if isinstance(x, bool):
        raise TypeError("boolean is not a scalar")
    if isinstance(x, float):
        raise TypeError("floats are not accepted; write p/q")
    if isinstance(x, (int, str)):
        return el.Q(x)
    raise TypeError(f"cannot read {x!r} as a rational")


# -- polarization --------------------------------------------------------------

class PolarizedForm:
    """Complete polarization of a homogeneous form.

    The evaluation cache is keyed by the multiset of arguments and only ever
    filled with exact values, so it is observationally inert.
    """

    def __init__(self, source: HomogeneousForm):
        if source.degree < 1:
            raise InputError("polarization needs degree at least 1")
        self.source = source
        self.dim = source.dim
        self.degree = source.degree
        self._cache: dict = {}
        self._partial_cache: dict = {}

    def __call__(self, *vectors) -> mpq:
        return self.eval_multi([(v, 1) for v in vectors])

    def eval_multi(self, args: Sequence[tuple]) -> mpq:
        """``F(v_1[n_1], ..., v_d[n_d])`` for ``args = [(v_1, n_1), ...]``."""
        merged: dict = {}
        for v, mult in args:
            if not isinstance(mult, int) or mult < 0:
                raise InputError(f"multiplicity {mult!r} must be a nonnegative integer")
            v = el.vec(v)
            if len(v) != self.dim:
                raise InputError(f"argument of length {len(v)}, expected {self.dim}")
            if mult:
                merged[v] = merged.get(v, 0) + mult
        if sum(merged.values()) != self.degree:
            raise InputError(f"multiplicities sum to {sum(merged.values())}, degree is {self.degree}")
        key = tuple(sorted(merged.items()))
        if key in self._cache:
            return self._cache[key]
        if any(el.is_zero(v) for v in merged):
            val = ZERO
        else:
            vs = [v for v, _ in key]
            mults = tuple(m for _, m in key)
            poly = self.source.restrict(vs, cap=mults)
            val = poly.get(mults, ZERO) * mpq(_fact_prod(mults), factorial(self.degree))
        self._cache[key] = val
        return val

    def mixed_sequence(self, v: Sequence, w: Sequence) -> list:
        """``[F(v[k], w[n-k]) for k = 0..n]`` from one bivariate expansion."""
        v, w = el.vec(v), el.vec(w)
        n = self.degree
        poly = self.source.restrict([v, w])
        nf = factorial(n)
        return [poly.get((k, n - k), ZERO) * mpq(factorial(k) * factorial(n - k), nf)
                for k in range(n + 1)]

    def partial(self, vectors: Sequence[Sequence]) -> HomogeneousForm:
        """The form ``x -> F(v_1, ..., v_k, x, ..., x)`` of degree ``n - k``."""
        k = len(vectors)
        if k > self.degree:
            raise InputError(f"{k} arguments exceed degree {self.degree}")
        vs = tuple(sorted(el.vec(v) for v in vectors))
        if vs in self._partial_cache:
            return self._partial_cache[vs]
        if k == 0:
            g = self.source
        else:
            # peel one vector at a time, reusing cached prefixes
            prev = self.partial(vs[:-1])
            raw = prev.derivative(vs[-1])
            scale = mpq(1, self.degree - k + 1)
            g = HomogeneousForm._trusted(self.dim, raw.degree, {e: c * scale for e, c in raw.coeffs.items()})
        self._partial_cache[vs] = g
        return g

    def quad_form(self, rest: Sequence[Sequence]) -> list:
        """Matrix ``Q(i, j) = F(e_i, e_j, rest...)``."""
        if len(rest) != self.degree - 2:
            raise InputError(f"quad_form needs {self.degree - 2} vectors, got {len(rest)}")
        return self.partial(rest).gram()

    def linear_form(self, rest: Sequence[Sequence]) -> tuple:
        """Vector ``x`` with ``x_j = F(e_j, rest...)``."""
        if len(rest) != self.degree - 1:
            raise InputError(f"linear_form needs {self.degree - 1} vectors, got {len(rest)}")
        return self.partial(rest).linear_coefficients()


def polarize(f: HomogeneousForm) -> PolarizedForm:
    return PolarizedForm(f)


def eval_multi(F: PolarizedForm, args: Sequence[tuple]) -> mpq:
    return F.eval_multi(args)


def quad_form(F: PolarizedForm, rest: Sequence[Sequence]) -> list:
    return F.quad_form(rest)


def form_from_polar_table(dim: int, degree: int, table: dict) -> HomogeneousForm:
    """Form whose polarization takes the given values on basis vectors.

    ``table`` maps nondecreasing index tuples to ``F(e_{i_1}, ..., e_{i_n})``;
    the coefficient of ``x^beta`` is ``n!/beta!`` times that value.
    """
    nfact = factorial(degree)
    coeffs = {}
    for idx, val in table.items():
        if val == 0:
            continue
        beta = [0] * dim
        for j in idx:
            beta[j] += 1
        coeffs[tuple(beta)] = val * mpq(nfact, _fact_prod(beta))
    return HomogeneousForm._trusted(dim, degree, coeffs)


def polar_table(F: PolarizedForm, generators: Sequence[Sequence]) -> dict:
    """``F(u_{j_1}, ..., u_{j_n})`` for every nondecreasing index tuple.

    Walks a derivative tree: each node differentiates along one more
    generator; at degree two the remaining pair is read from a Gram matrix.
    """
    us = [el.vec(u) for u in generators]
    k = len(us)
    n = F.degree
    nfact = mpq(1, factorial(n))
    table: dict = {}

    def walk(g: HomogeneousForm, prefix: tuple, start: int):
        d = g.degree
        if d == 1:
            c = g.linear_coefficients()
            for a in range(start, k):
                table[prefix + (a,)] = el.dot(c, us[a]) * nfact
        elif d == 2:
            gm = g.gram()
            two = 2 * nfact
            for a in range(start, k):
                ga = el.matvec(gm, us[a])
                for b in range(a, k):
                    table[prefix + (a, b)] = el.dot(ga, us[b]) * two
        else:
            for a in range(start, k):
                walk(g.derivative(us[a]), prefix + (a,), a)

    walk(F.source, (), 0)
    return table


# -- inequalities and Lorentzian tests ----------------------------------------

@dataclass(frozen=True)
class AFResult:
    holds: bool
    gap: mpq
    cross: mpq
    first: mpq
    second: mpq


def af_check(F: PolarizedForm, v1, v2, rest, instance=None) -> AFResult:
    """Hodge index inequality ``F(v1,v2,rest)^2 >= F(v1,v1,rest) F(v2,v2,rest)``."""
    if instance is not None:
        for v in (v1, v2, *rest):
            instance.require_nef(v)
    rest = [el.vec(r) for r in rest]
    q = F.quad_form(rest)
    v1, v2 = el.vec(v1), el.vec(v2)
    q1 = el.matvec(q, v1)
    cross = el.dot(q1, v2)
    a = el.dot(q1, v1)
    b = el.dot(el.matvec(q, v2), v2)
    gap = cross * cross - a * b
    return AFResult(gap >= 0, gap, cross, a, b)


def m_convex(support: Iterable[Sequence[int]]):
    """Exchange property of a finite set of exponent vectors.

    Returns ``(True, None)`` or ``(False, (alpha, beta, i))`` with ``i``
    1-based: ``alpha_i > beta_i`` yet no ``j`` with ``alpha_j < beta_j`` has
    ``alpha - e_i + e_j`` in the set.
    """
    pts = sorted({tuple(p) for p in support})
    if not pts:
        return True, None
    deg = sum(pts[0])
    if any(sum(p) != deg for p in pts):
        raise InputError("support vectors have different total degree")
    dim = len(pts[0])
    if len(pts) == comb(deg + dim - 1, dim - 1):
        return True, None
    # For each alpha, swaps[i, j] records whether alpha - e_i + e_j is present;
    # the exchange then fails at (beta, i) when alpha_i > beta_i and no
    # admissible j with alpha_j < beta_j has swaps[i, j].  Integer arrays only.
    present = set(pts)
    arr = np.array(pts, dtype=np.int64)
    for a in reversed(pts):
        swaps = np.zeros((dim, dim), dtype=np.int64)
        for i in range(dim):
            if a[i] == 0:
                continue
            for j in range(dim):
                if j != i:
                    c = list(a)
                    c[i] -= 1
                    c[j] += 1
                    if tuple(c) in present:
                        swaps[i, j] = 1
        av = np.array(a, dtype=np.int64)
        higher = av > arr
        lower = (av < arr).astype(np.int64)
        reachable = lower @ swaps.T
        bad = higher & (reachable == 0)
        if bad.any():
            row, i = np.argwhere(bad)[0]
            return False, (a, pts[int(row)], int(i) + 1)
    return True, None


@dataclass
class LorentzVerdict:
    verdict: bool
    reason: str = ""
    witness: Optional[dict] = None
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict


def _multisets(k: int, size: int):
    for combo in itertools.combinations_with_replacement(range(k), size):
        e = [0] * k
        for j in combo:
            e[j] += 1
        yield tuple(e)


def is_lorentzian_orthant(f: HomogeneousForm) -> LorentzVerdict:
    """Nonnegative coefficients, M-convex support, and every order-(n-2)
    partial derivative has a Hessian with at most one positive eigenvalue."""
    n, k = f.degree, f.dim
    if n < 2:
        raise InputError("orthant Lorentzian test needs degree at least 2")
    for exp, c in f.coeffs.items():
        if c < 0:
            return LorentzVerdict(False, "negative coefficient",
                                  {"kind": "coefficient", "exp": list(exp), "coef": c})
    checked = 0
    for alpha in _multisets(k, n - 2):
        h = [[ZERO] * k for _ in range(k)]
        nonzero = False
        for i in range(k):
            for j in range(i, k):
                e = list(alpha)
                e[i] += 1
                e[j] += 1
                c = f.coeffs.get(tuple(e))
                if c:
                    val = c * _fact_prod(e)
                    h[i][j] = h[j][i] = val
                    nonzero = True
        if not nonzero:
            continue
        checked += 1
        sig = el.signature(h)
        if sig[0] > 1:
            return LorentzVerdict(False, "Hessian with more than one positive eigenvalue",
                                  {"kind": "hessian", "alpha": list(alpha), "matrix": h,
                                   "signature": list(sig)})
    ok, wit = m_convex(f.coeffs)
    if not ok:
        a, b, i = wit
        return LorentzVerdict(False, "support not M-convex",
                              {"kind": "support", "alpha": list(a), "beta": list(b), "i": i})
    return LorentzVerdict(True, "orthant Lorentzian", None,
                          {"terms": len(f.coeffs), "hessians_checked": checked})


def is_c_lorentzian(f: HomogeneousForm, cone_generators: Sequence[Sequence]) -> LorentzVerdict:
    """Lorentzian test on the open cone spanned by ``cone_generators``.

    The pullback ``g(y) = f(sum y_j u_j)`` must be orthant Lorentzian with
    nonnegative coefficients (zeros allowed), and ``f`` must be strictly
    positive at ``w = sum u_j``.
    """
    if f.degree < 1:
        raise InputError("degree-0 forms are not handled")
    us = [el.vec(u) for u in cone_generators]
    if not us or any(len(u) != f.dim for u in us):
        raise InputError("generators must be nonempty vectors of the form's dimension")
    if el.rank(us) != f.dim:
        raise InputError("cone generators do not span the ambient space")
    w = tuple(sum(col, ZERO) for col in zip(*us))
    fw = f.evaluate(w)
    g = f.pullback(us)
    cert = {
        "generators": len(us),
        "interior_witness": w,
        "value_at_witness": fw,
        "pullback_terms": len(g.coeffs),
        "pullback_zero_terms": comb(len(us) + f.degree - 1, f.degree) - len(g.coeffs),
        "note": "pullback coefficients required nonnegative; strictness from the interior witness",
    }
    if fw <= 0:
        return LorentzVerdict(False, "not positive at the interior witness",
                              {"kind": "positivity", "point": w, "value": fw}, cert)
    if f.degree == 1:
        neg = next(((e, c) for e, c in g.coeffs.items() if c < 0), None)
        if neg is not None:
            return LorentzVerdict(False, "negative coefficient",
                                  {"kind": "coefficient", "exp": list(neg[0]), "coef": neg[1]}, cert)
        inner = LorentzVerdict(True, "linear form")
    else:
        inner = is_lorentzian_orthant(g)
    cert.update(inner.certificate)
    if not inner:
        return LorentzVerdict(False, inner.reason, inner.witness, cert)
    return LorentzVerdict(True, "Lorentzian on the generated cone", None, cert)
