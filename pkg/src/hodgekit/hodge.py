"""Numerical dimension, criticality and kernels of codimension-two products.

Everything here works over a ``LorentzInstance``: classes are vectors, the
intersection product is the polarized form ``F`` and the reference ample
class is the instance's interior witness ``omega``.  Subsets in reports are
1-based; internal indices are 0-based.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from gmpy2 import mpq

from . import exactlin as el
from .errors import InputError, PreconditionError, TheoremViolation
from .instance import LorentzInstance, NefCertificate, NefCollection

ZERO = el.ZERO

NOT_SUBCRITICAL = "NOT_SUBCRITICAL"
SUBCRITICAL = "SUBCRITICAL"
CRITICAL = "CRITICAL"
SUPERCRITICAL = "SUPERCRITICAL"
_RANK = {NOT_SUBCRITICAL: 0, SUBCRITICAL: 1, CRITICAL: 2, SUPERCRITICAL: 3}


def _one_based(subset) -> tuple:
    return tuple(i + 1 for i in sorted(subset))


def _subsets(m: int):
    for k in range(1, m + 1):
        yield from itertools.combinations(range(m), k)


# -- numerical dimension -----------------------------------------------------

def _nd(inst: LorentzInstance, v: Sequence, witness: Optional[Sequence] = None) -> int:
    w = inst.interior_witness if witness is None else el.vec(witness)
    seq = inst.F.mixed_sequence(v, w)
    return max(k for k, a in enumerate(seq) if a > 0)


def nd(inst: LorentzInstance, v: Sequence, witness: Optional[Sequence] = None,
       certified: bool = False) -> int:
    """Largest ``k`` with ``F(v[k], w[n-k]) > 0``.

    ``v`` must be nef; pass ``certified=True`` when it is nef by construction.
    """
    v = el.vec(v)
    if not certified:
        inst.certify_nef(v)
    if witness is not None and not inst.is_interior(witness):
        raise PreconditionError("witness is not an interior class", witness=el.vec(witness))
    return _nd(inst, v, witness)


@dataclass
class WitnessIndependence:
    value: int
    per_witness: list          # [(witness, nd), ...]
    ok: bool


def nd_witness_independence(inst: LorentzInstance, v: Sequence,
                            alt_witnesses: Sequence[Sequence],
                            certified: bool = False) -> WitnessIndependence:
    v = el.vec(v) if certified else inst.require_nef(v)
    base = _nd(inst, v)
    rows = []
    for w in alt_witnesses:
        w = el.vec(w)
        if not inst.is_interior(w):
            raise PreconditionError("alternative witness is not interior", witness=w)
        rows.append((w, _nd(inst, v, w)))
    bad = [(w, k) for w, k in rows if k != base]
    if bad:
        raise TheoremViolation("numerical dimension depends on the witness",
                               witness={"class": v, "base": base, "disagree": bad})
    return WitnessIndependence(base, rows, True)


@dataclass
class Submodularity:
    holds: bool
    lhs: int
    rhs: int
    values: dict               # "x+y+z", "z", "x+z", "y+z" -> nd


def nd_submodularity(inst: LorentzInstance, x, y, z, certified: bool = False) -> Submodularity:
    """``nd(x+y+z) + nd(z) <= nd(x+z) + nd(y+z)``."""
    x, y, z = el.vec(x), el.vec(y), el.vec(z)
    if not certified:
        for v in (x, y, z):
            inst.certify_nef(v)
    vals = {
        "x+y+z": _nd(inst, el.add(el.add(x, y), z)),
        "z": _nd(inst, z),
        "x+z": _nd(inst, el.add(x, z)),
        "y+z": _nd(inst, el.add(y, z)),
    }
    lhs = vals["x+y+z"] + vals["z"]
    rhs = vals["x+z"] + vals["y+z"]
    return Submodularity(lhs <= rhs, lhs, rhs, vals)


def nd_table(coll: NefCollection) -> dict:
    """``{subset (0-based tuple): nd(L_I)}`` over all nonempty subsets."""
    inst = coll.instance
    return {s: _nd(inst, coll.subset_sum(s)) for s in _subsets(coll.m)}


# -- non-vanishing -----------------------------------------------------------

@dataclass
class Nonvanishing:
    holds: bool
    value: mpq                 # F(a_1, ..., a_m, omega[n - m])
    violating: Optional[tuple]  # 1-based subset with nd < |I|
    nd_table: dict


def product_value(coll: NefCollection) -> mpq:
    inst = coll.instance
    args = [(c, 1) for c in coll.classes] + [(inst.interior_witness, inst.degree - coll.m)]
    return inst.F.eval_multi(args)


def nonvanishing(coll: NefCollection) -> Nonvanishing:
    """Decide ``F(a_1, ..., a_m, omega[n-m]) > 0`` directly and by the nd test."""
    value = product_value(coll)
    table = nd_table(coll)
    violating = next((s for s, k in table.items() if k < len(s)), None)
    direct = value > 0
    criterion = violating is None
    if direct != criterion:
        raise TheoremViolation("direct positivity and the nd criterion disagree",
                               witness={"value": value, "violating": violating})
    if value < 0:
        raise TheoremViolation("negative product of nef classes", witness={"value": value})
    return Nonvanishing(direct, value, None if violating is None else _one_based(violating),
                        {_one_based(s): k for s, k in table.items()})


# -- criticality -------------------------------------------------------------

@dataclass
class CriticalityReport:
    status: str
    nd_table: dict                          # 1-based subset -> nd
    vacuous: bool = False
    violating: Optional[tuple] = None        # NOT_SUBCRITICAL: nd(L_I) < |I|
    maximal_critical: list = field(default_factory=list)   # CRITICAL: nd = |I| + 1, maximal
    maximal_disjoint: Optional[bool] = None
    subcritical_subsets: list = field(default_factory=list)  # SUBCRITICAL: nd = |I|
    maximal_subcritical: Optional[tuple] = None
    extension_values: dict = field(default_factory=dict)    # I -> F(L_I[|I|+1], L_M, omega...)
    extension_ok: Optional[bool] = None

    def at_least(self, status: str) -> bool:
        return _RANK[self.status] >= _RANK[status]


def classify(coll: NefCollection) -> CriticalityReport:
    m = coll.m
    if m == 0:
        return CriticalityReport(SUPERCRITICAL, {}, vacuous=True)
    raw = nd_table(coll)
    table = {_one_based(s): k for s, k in raw.items()}
    excess = {s: k - len(s) for s, k in raw.items()}
    low = min(excess.values())
    if low < 0:
        bad = next(s for s, e in excess.items() if e < 0)
        return CriticalityReport(NOT_SUBCRITICAL, table, violating=_one_based(bad))
    if low >= 2:
        return CriticalityReport(SUPERCRITICAL, table)
    if low == 1:
        tight = [frozenset(s) for s, e in excess.items() if e == 1]
        maximal = [s for s in tight if not any(s < t for t in tight)]
        disjoint = all(not (a & b) for a, b in itertools.combinations(maximal, 2))
        return CriticalityReport(CRITICAL, table,
                                 maximal_critical=sorted(_one_based(s) for s in maximal),
                                 maximal_disjoint=disjoint)
    sub = [frozenset(s) for s, e in excess.items() if e == 0]
    big = frozenset().union(*sub)
    inst = coll.instance
    values = {}
    rest_idx = [i for i in range(m) if i not in big]
    lm = [coll.classes[i] for i in sorted(big)]
    for k in range(1, len(rest_idx) + 1):
        for s in itertools.combinations(rest_idx, k):
            li = coll.subset_sum(s)
            pad = inst.degree - (k + 1) - len(lm)
            if pad < 0:
                continue
            args = [(li, k + 1)] + [(c, 1) for c in lm] + [(inst.interior_witness, pad)]
            values[_one_based(s)] = inst.F.eval_multi(args)
    return CriticalityReport(
        SUBCRITICAL, table,
        subcritical_subsets=sorted(_one_based(s) for s in sub),
        maximal_subcritical=_one_based(big),
        extension_values=values,
        extension_ok=all(v > 0 for v in values.values()),
    )


# -- kernels -----------------------------------------------------------------

def _require_codim_two(coll_or_classes, inst: LorentzInstance) -> list:
    classes = list(coll_or_classes)
    if len(classes) != inst.degree - 2:
        raise InputError(f"need {inst.degree - 2} classes for a codimension-two product, got {len(classes)}")
    return classes


def kernel_matrix(inst: LorentzInstance, classes: Sequence[Sequence]) -> list:
    """``M(j, k) = F(L_1, ..., L_{n-2}, e_j, e_k)``."""
    classes = _require_codim_two(classes, inst)
    return inst.F.quad_form([el.vec(c) for c in classes])


def _kernel(inst, classes):
    return el.nullspace(kernel_matrix(inst, classes), inst.dim)


def kernel(coll: NefCollection) -> list:
    return _kernel(coll.instance, coll.classes)


@dataclass
class EffectiveKernel:
    basis: list
    labels: list
    members: list


def _v_eff(inst: LorentzInstance, classes) -> EffectiveKernel:
    K = kernel_matrix(inst, classes)
    labels, members = [], []
    for lab, d in inst.eff_generators:
        if el.is_zero(el.matvec(K, d)):
            labels.append(lab)
            members.append(d)
    return EffectiveKernel(el.row_space_basis(members), labels, members)


def v_eff(coll: NefCollection) -> EffectiveKernel:
    return _v_eff(coll.instance, coll.classes)


# -- proportionality ---------------------------------------------------------

PROPORTIONAL = "PROPORTIONAL"
KERNEL_CERT = "KERNEL_CERT"
NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass
class Proportionality:
    kind: str
    c: Optional[mpq]
    gap: mpq
    cross: mpq
    qx: mpq
    qy: mpq
    in_kernel: tuple = ()       # which of "x", "y" pair to zero with everything


def proportionality(Q: Sequence[Sequence], x: Sequence, y: Sequence) -> Proportionality:
    """Decide whether ``Q(x, -)`` and ``Q(y, -)`` are proportional.

    ``Q`` must have exactly one positive eigenvalue and ``Q(x), Q(y) >= 0``.
    On equality ``c`` satisfies ``Q(y, -) = c Q(x, -)``.
    """
    pos, _, _ = el.signature(Q)
    if pos >= 2:
        raise PreconditionError(f"quadratic form has {pos} positive eigenvalues")
    x, y = el.vec(x), el.vec(y)
    lx, ly = el.matvec(Q, x), el.matvec(Q, y)
    qx, qy, cross = el.dot(lx, x), el.dot(ly, y), el.dot(lx, y)
    if qx < 0 or qy < 0:
        raise PreconditionError("both classes need nonnegative square", witness=(qx, qy))
    gap = cross * cross - qx * qy
    if gap < 0:
        raise TheoremViolation("reverse Cauchy-Schwarz fails", witness={"gap": gap})
    if gap > 0:
        return Proportionality(NOT_APPLICABLE, None, gap, cross, qx, qy)
    zx, zy = el.is_zero(lx), el.is_zero(ly)
    if zx or zy:
        tags = tuple(t for t, z in (("x", zx), ("y", zy)) if z)
        c = ZERO if zy and not zx else None
        return Proportionality(KERNEL_CERT, c, gap, cross, qx, qy, tags)
    i = next(j for j, a in enumerate(lx) if a != 0)
    c = ly[i] / lx[i]
    if el.scale(c, lx) != ly:
        raise TheoremViolation("equality without proportional linear forms",
                               witness={"x": x, "y": y})
    return Proportionality(PROPORTIONAL, c, gap, cross, qx, qy)


# -- local Hodge index -------------------------------------------------------

@dataclass
class LocalHiiCertificate:
    alpha: tuple
    beta: tuple
    r: int                               # 1-based slot removed
    family_labels: list                  # spanning family used
    augmented: list                      # labels of nef generators added to span
    kernel_side: list                    # labels of members D with L.D = 0
    decomposition: dict                  # label -> coefficient of beta - alpha
    values: dict                         # label -> F(D, beta, beta, L without r)
    negated: tuple                       # -values in generator order
    residual: tuple
    verified: bool


def _spanning_family(inst: LorentzInstance):
    labels = [lab for lab, _ in inst.eff_generators]
    vecs = [d for _, d in inst.eff_generators]
    augmented = []
    cur = el.rank(vecs) if vecs else 0
    for k, g in enumerate(inst.nef_generators):
        if cur == inst.dim:
            break
        r = el.rank(vecs + [g])
        if r > cur:
            lab = f"nef{k + 1}"
            labels.append(lab)
            vecs.append(g)
            augmented.append(lab)
            cur = r
    return labels, vecs, augmented


def local_hii(coll: NefCollection, r: int, alpha: Sequence) -> LocalHiiCertificate:
    """Correct ``alpha`` in the kernel to ``beta`` with ``beta - alpha`` effective-kernel
    spanned and ``-beta^2 . L_without_r`` nonnegative on every effective generator."""
    inst = coll.instance
    n = inst.degree
    classes = _require_codim_two(coll.classes, inst)
    if not (isinstance(r, int) and 1 <= r <= n - 2):
        raise InputError(f"r must lie in [1, {n - 2}]")
    alpha = el.vec(alpha)
    if len(alpha) != inst.dim:
        raise InputError(f"alpha has {len(alpha)} entries, expected {inst.dim}")
    rep = classify(coll)
    if not rep.at_least(CRITICAL):
        raise PreconditionError(f"collection is {rep.status}, need at least CRITICAL")
    K = kernel_matrix(inst, classes)
    pair = el.matvec(K, alpha)
    nz = [(j, p) for j, p in enumerate(pair) if p != 0]
    if nz:
        j, p = nz[0]
        raise PreconditionError(f"alpha is not in the kernel: pairing with e{j + 1} is {p}",
                                witness={"index": j + 1, "value": p})
    labels, fam, augmented = _spanning_family(inst)
    a = el.express_in(fam, alpha)
    if a is None:
        raise PreconditionError("effective and nef generators do not span the class space")
    vside = [i for i, d in enumerate(fam) if not el.is_zero(el.matvec(K, d))]
    kside = [i for i, d in enumerate(fam) if i not in set(vside)]
    bad_aug = [labels[i] for i in kside if labels[i] in augmented]
    if bad_aug:
        raise PreconditionError("an added nef generator lies in the kernel", witness=bad_aug)
    rest = [inst.interior_witness] + [c for i, c in enumerate(classes) if i != r - 1]
    Qr = inst.F.quad_form(rest)
    QD = [el.matvec(Qr, d) for d in fam]
    A = [[el.dot(QD[i], fam[j]) for j in range(len(fam))] for i in range(len(fam))]
    z = el.solve_affine(A, el.zeros(len(fam)), fixed={i: a[i] for i in vside}, rows=kside)
    if z is None:
        raise PreconditionError(
            "correction system is inconsistent: the collection is not critical "
            "or the effective family does not generate the pseudo-effective cone",
            witness={"kernel_side": [labels[i] for i in kside]})
    beta = el.lincomb(z, fam, inst.dim)
    residual = tuple(el.dot(A[i], z) for i in kside)
    decomposition = {labels[i]: z[i] - a[i] for i in kside}
    lr = [c for i, c in enumerate(classes) if i != r - 1]
    values = {lab: _pair3(inst, d, beta, lr) for lab, d in inst.eff_generators}
    recon = el.lincomb([decomposition[labels[i]] for i in kside], [fam[i] for i in kside], inst.dim)
    ok = (recon == el.sub(beta, alpha)
          and all(x == 0 for x in residual)
          and all(v <= 0 for v in values.values()))
    if not ok and inst.eff_exact:
        raise TheoremViolation("local Hodge index certificate failed",
                               witness={"beta": beta, "values": values})
    return LocalHiiCertificate(
        alpha, beta, r, labels, augmented, [labels[i] for i in kside], decomposition,
        values, tuple(-values[lab] for lab, _ in inst.eff_generators), residual, ok)


def _pair3(inst: LorentzInstance, d, beta, rest) -> mpq:
    args = [(d, 1), (beta, 2)] + [(c, 1) for c in rest]
    return inst.F.eval_multi(args)


def recheck_local_hii(coll: NefCollection, cert: LocalHiiCertificate) -> bool:
    """Independent re-check of both conclusions from the certificate alone."""
    inst = coll.instance
    K = kernel_matrix(inst, coll.classes)
    lookup = dict(inst.eff_generators)
    lookup.update({f"nef{k + 1}": g for k, g in enumerate(inst.nef_generators)})
    diff = el.zeros(inst.dim)
    for lab, c in cert.decomposition.items():
        d = lookup[lab]
        if not el.is_zero(el.matvec(K, d)):
            return False
        diff = el.add(diff, el.scale(c, d))
    if diff != el.sub(cert.beta, cert.alpha):
        return False
    lr = [c for i, c in enumerate(coll.classes) if i != cert.r - 1]
    return all(_pair3(inst, d, cert.beta, lr) <= 0 for _, d in inst.eff_generators)


# -- degenerate pairs --------------------------------------------------------

@dataclass
class DegeneratePair:
    holds: bool
    product: mpq               # L.alpha.beta
    reference_gap: mpq         # L.A.alpha - L.A.beta
    difference_form: tuple     # L.(alpha - beta)


def _degenerate(inst, K, alpha, beta) -> DegeneratePair:
    ka = el.matvec(K, alpha)
    prod = el.dot(ka, beta)
    w = inst.interior_witness
    ref = el.dot(ka, w) - el.dot(el.matvec(K, beta), w)
    diff = el.matvec(K, el.sub(alpha, beta))
    first = prod == 0 and ref == 0
    second = prod == 0 and el.is_zero(diff)
    if first != second:
        raise TheoremViolation("the two degenerate-pair tests disagree",
                               witness={"alpha": alpha, "beta": beta})
    return DegeneratePair(first, prod, ref, diff)


def _require_positive_square(inst, K):
    w = inst.interior_witness
    if el.dot(el.matvec(K, w), w) <= 0:
        raise PreconditionError("product vanishes against the reference class squared")


def degenerate_pair(coll: NefCollection, alpha: Sequence, beta: Sequence,
                    certified: bool = False) -> DegeneratePair:
    inst = coll.instance
    alpha, beta = el.vec(alpha), el.vec(beta)
    if not certified:
        inst.certify_nef(alpha)
        inst.certify_nef(beta)
    K = kernel_matrix(inst, coll.classes)
    _require_positive_square(inst, K)
    return _degenerate(inst, K, alpha, beta)


@dataclass
class DegenerateProbe:
    basis: list
    pairs: list                # [(label_a, label_b), ...]
    menu_size: int
    lower_bound: bool = True


SUM_MENU_LIMIT = 12


def default_menu(inst: LorentzInstance) -> list:
    """Labelled nef classes: nef effective generators, nef generators and,
    for small menus, their pairwise sums."""
    menu, seen = [], set()

    def push(lab, v):
        if v not in seen and not el.is_zero(v):
            seen.add(v)
            menu.append((lab, v))

    for lab, d in inst.eff_generators:
        if inst.is_nef(d):
            push(lab, d)
    for k, g in enumerate(inst.nef_generators):
        push(f"nef{k + 1}", g)
    if len(menu) <= SUM_MENU_LIMIT:
        base = list(menu)
        for (la, a), (lb, b) in itertools.combinations(base, 2):
            push(f"{la}+{lb}", el.add(a, b))
    return menu


def v_deg_probe(coll: NefCollection, menu: Optional[Sequence] = None) -> DegenerateProbe:
    """Span of ``alpha - beta`` over degenerate menu pairs.  A lower bound only."""
    inst = coll.instance
    if menu is None:
        menu = default_menu(inst)
    else:
        menu = [(lab, inst.require_nef(v)) for lab, v in menu]
    K = kernel_matrix(inst, coll.classes)
    _require_positive_square(inst, K)
    diffs, found = [], []
    for (la, a), (lb, b) in itertools.combinations(menu, 2):
        if a == b:
            continue
        if _degenerate(inst, K, a, b).holds:
            found.append((la, lb))
            diffs.append(el.sub(a, b))
    return DegenerateProbe(el.row_space_basis(diffs), found, len(menu))


# -- hard Lefschetz ----------------------------------------------------------

def _single_nd_ordering(inst, classes) -> Optional[tuple]:
    nds = [_nd(inst, c) for c in classes]
    for perm in itertools.permutations(range(len(classes))):
        if all(nds[p] >= i + 3 for i, p in enumerate(perm)):
            return tuple(p + 1 for p in perm)
    return None


@dataclass
class HLReport:
    kernel: list
    v_eff: EffectiveKernel
    v_deg: DegenerateProbe
    hypothesis: Optional[str]           # hypothesis forcing ker = V_eff, or None
    ordering: Optional[tuple]
    kernel_is_eff: bool
    kernel_is_eff_plus_deg: bool
    hard_lefschetz: bool


def hl_check(coll: NefCollection, menu: Optional[Sequence] = None) -> HLReport:
    inst = coll.instance
    classes = _require_codim_two(coll.classes, inst)
    ker = _kernel(inst, classes)
    ve = _v_eff(inst, classes)
    probe = v_deg_probe(coll, menu)
    for v in list(ve.basis) + list(probe.basis):
        if not _in_span(ker, v):
            raise TheoremViolation("kernel misses an effective or degenerate class", witness=v)
    ordering = _single_nd_ordering(inst, classes)
    hypothesis = None
    if ordering is not None:
        hypothesis = "nd ordering"
    elif inst.fan_model is not None and inst.ample_oracle is not None \
            and all(inst.ample_oracle(c) for c in classes):
        hypothesis = "ample classes on a Lorentzian fan"
    is_eff = el.same_span(ker, ve.basis)
    if hypothesis and not is_eff and inst.eff_exact:
        raise TheoremViolation("kernel differs from the effective kernel under a confirmed hypothesis",
                               witness={"kernel": ker, "v_eff": ve.basis})
    with_deg = el.same_span(ker, list(ve.basis) + list(probe.basis))
    return HLReport(ker, ve, probe, hypothesis, ordering, is_eff, with_deg, not ker)


def _in_span(basis, v) -> bool:
    if el.is_zero(v):
        return True
    return bool(basis) and el.span_contains(basis, v)


@dataclass
class FlagRecord:
    order: tuple               # 1-based permutation defining the flag
    nds: tuple                 # nd(L_{I_k}) for k = 1..m
    kernel: list
    v_eff: list
    equal: bool


@dataclass
class FlagReport:
    flags: list
    kernel_sum: list
    v_eff: list
    ok: bool


def _summed_collection(coll: NefCollection, subsets) -> NefCollection:
    inst = coll.instance
    classes, certs = [], []
    for s in subsets:
        classes.append(coll.subset_sum(s))
        cs = [coll.certificates[i] for i in s]
        if all(c.kind == "generators" for c in cs):
            coef = el.zeros(len(inst.nef_generators))
            for c in cs:
                coef = el.add(coef, c.coefficients)
            certs.append(NefCertificate("generators", coef))
        else:
            certs.append(NefCertificate("sum", None, [_one_based(s)]))
    return NefCollection(inst, tuple(classes), tuple(certs))


def flag_collections(coll: NefCollection) -> FlagReport:
    inst = coll.instance
    _require_codim_two(coll.classes, inst)
    rep = classify(coll)
    if rep.status != SUPERCRITICAL:
        raise PreconditionError(f"collection is {rep.status}, need SUPERCRITICAL")
    m = coll.m
    records, ksum = [], []
    for perm in itertools.permutations(range(m)):
        subsets = [perm[:k + 1] for k in range(m)]
        fc = _summed_collection(coll, subsets)
        nds = tuple(_nd(inst, c) for c in fc.classes)
        if any(k < i + 3 for i, k in enumerate(nds)):
            raise TheoremViolation("flag class below the supercritical bound",
                                   witness={"order": perm, "nd": nds})
        ker = _kernel(inst, fc.classes)
        ve = _v_eff(inst, fc.classes).basis
        eq = el.same_span(ker, ve)
        if not eq and inst.eff_exact:
            raise TheoremViolation("flag kernel differs from its effective kernel",
                                   witness={"order": perm})
        records.append(FlagRecord(tuple(p + 1 for p in perm), nds, ker, ve, eq))
        ksum.extend(ker)
    total = el.row_space_basis(ksum)
    base = _v_eff(inst, coll.classes).basis
    ok = el.same_span(total, base) and all(r.equal for r in records)
    if not ok and inst.eff_exact:
        raise TheoremViolation("sum of flag kernels differs from the effective kernel",
                               witness={"sum": total, "v_eff": base})
    return FlagReport(records, total, base, ok)


# -- log-concavity -----------------------------------------------------------

@dataclass
class Extremal:
    k: int
    c: Optional[mpq]
    difference: tuple          # A - cB
    in_v_eff: bool
    big: bool
    consistent: Optional[bool]  # None when the big-nef hypothesis is absent


@dataclass
class LogConcavity:
    sequence: list
    logconcave: bool
    equalities: list           # indices k with a_k^2 = a_{k-1} a_{k+1} and a_k > 0
    extremals: list


def logconcavity(inst: LorentzInstance, A: Sequence, B: Sequence, certified: bool = False) -> LogConcavity:
    A, B = el.vec(A), el.vec(B)
    if not certified:
        inst.certify_nef(A)
        inst.certify_nef(B)
    n = inst.degree
    a = inst.F.mixed_sequence(A, B)
    lc = all(a[k] * a[k] >= a[k - 1] * a[k + 1] for k in range(1, n))
    eq = [k for k in range(1, n) if a[k] > 0 and a[k] * a[k] == a[k - 1] * a[k + 1]]
    big = _nd(inst, A) == n and _nd(inst, B) == n
    ext = []
    for k in eq:
        classes = [A] * (k - 1) + [B] * (n - k - 1)
        Q = inst.F.quad_form(classes)
        p = proportionality(Q, B, A)
        c = p.c
        if c is None:
            raise TheoremViolation("equality without a proportionality constant", witness={"k": k})
        diff = el.sub(A, el.scale(c, B))
        inside = _in_span(_v_eff(inst, classes).basis, diff)
        consistent = inside if big else None
        if big and not inside and inst.eff_exact:
            raise TheoremViolation("extremal difference is not effective-kernel spanned",
                                   witness={"k": k, "difference": diff})
        ext.append(Extremal(k, c, diff, inside, big, consistent))
    return LogConcavity(a, lc, eq, ext)


@dataclass
class HodgeIndexExtremal:
    cross: mpq                  # L.A.B
    first: mpq                  # L.A^2
    second: mpq                 # L.B^2
    gap: mpq
    equality: bool
    c: Optional[mpq] = None
    decomposition: Optional[dict] = None   # label -> coefficient, when one exists
    decomposable: Optional[bool] = None


def hodge_index_extremal(coll: NefCollection, A: Sequence, B: Sequence,
                         certified: bool = False) -> HodgeIndexExtremal:
    inst = coll.instance
    A, B = el.vec(A), el.vec(B)
    if not certified:
        inst.certify_nef(A)
        inst.certify_nef(B)
    K = kernel_matrix(inst, coll.classes)
    ka, kb = el.matvec(K, A), el.matvec(K, B)
    cross, first, second = el.dot(ka, B), el.dot(ka, A), el.dot(kb, B)
    gap = cross * cross - first * second
    out = HodgeIndexExtremal(cross, first, second, gap, gap == 0)
    if gap != 0 or cross <= 0:
        return out
    p = proportionality(K, B, A)
    out.c = p.c
    diff = el.sub(A, el.scale(p.c, B))
    ve = _v_eff(inst, coll.classes)
    coeffs = el.express_in(ve.members, diff)
    if coeffs is None:
        out.decomposable = False
        big = _nd(inst, A) == inst.degree and _nd(inst, B) == inst.degree
        if big and inst.eff_exact:
            raise TheoremViolation("no effective decomposition in the extremal case",
                                   witness={"difference": diff})
    else:
        out.decomposable = True
        out.decomposition = {lab: c for lab, c in zip(ve.labels, coeffs) if c != 0}
    return out
