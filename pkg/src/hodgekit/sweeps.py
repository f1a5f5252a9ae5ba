"""Randomized property sweeps over the standard instances.

The generator is seeded from ``HODGEKIT_SEED`` (default ``20240601``) so
every run is reproducible.  Random nef classes are nonnegative combinations
of nef generators, nef by construction.
"""
from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import exactlin as el
from . import hodge, tropfan
from .instance import (LorentzInstance, NefCollection, build_bergman, build_diagonal_torus,
                       build_symmetric_torus)
from .matroid import Matroid

DEFAULT_SEED = 20240601


def seed() -> int:
    raw = os.environ.get("HODGEKIT_SEED")
    return DEFAULT_SEED if raw is None else int(raw)


def make_rng(s: Optional[int] = None) -> random.Random:
    return random.Random(seed() if s is None else s)


# -- standard instances ------------------------------------------------------

@lru_cache(maxsize=None)
def diagonal(d: int) -> LorentzInstance:
    return build_diagonal_torus(d)


@lru_cache(maxsize=None)
def symmetric(d: int) -> LorentzInstance:
    return build_symmetric_torus(d)


@lru_cache(maxsize=None)
def bergman_with_simplices(r: int, n: int) -> LorentzInstance:
    """Bergman fan of ``U(r, n)`` with the simplex classes of the subsets of
    ``{1, ..., min(n, 4)}`` added as nef generators, so that random nef
    classes reach every numerical dimension."""
    m = Matroid.uniform(r, n)
    fan, _ = tropfan.bergman(m)
    extra = []
    for k in (2, 3):
        for s in itertools.combinations(range(1, min(n, 4) + 1), k):
            extra.append(tropfan.bergman_simplex_class(fan, s))
    return build_bergman(m, extra_nef=extra, validate=False, label=f"bergman-{r}-{n}+simplices")


@lru_cache(maxsize=None)
def critical_fan() -> NefCollection:
    """``U(4,4)`` Bergman fan with the triangle class ``L``; ``(L)`` is critical."""
    m = Matroid.uniform(4, 4)
    fan, _ = tropfan.bergman(m)
    tri = tropfan.bergman_simplex_class(fan, (1, 2, 3))
    inst = build_bergman(m, extra_nef=[tri], validate=False, label="bergman-4-4+triangle")
    return NefCollection.create(inst, [inst.fan_model.from_pl(tri)])


def standard(name: str) -> LorentzInstance:
    table = {
        "DT3": lambda: diagonal(3),
        "DT4": lambda: diagonal(4),
        "DT5": lambda: diagonal(5),
        "SYM3": lambda: symmetric(3),
        "U45": lambda: bergman_with_simplices(4, 5),
    }
    return table[name]()


# -- random classes ----------------------------------------------------------

def random_coefficients(inst: LorentzInstance, rng: random.Random, max_terms: int = 3,
                        hi: int = 3) -> tuple:
    """Sparse nonnegative coefficients: between 0 and ``max_terms`` generators."""
    k = len(inst.nef_generators)
    coeffs = [0] * k
    for i in rng.sample(range(k), rng.randint(0, min(max_terms, k))):
        coeffs[i] = rng.randint(1, hi)
    return el.vec(coeffs)


def random_nef(inst: LorentzInstance, rng: random.Random, **kw) -> tuple:
    return inst.combination(random_coefficients(inst, rng, **kw))


def random_collection(inst: LorentzInstance, rng: random.Random, m: int, **kw) -> NefCollection:
    rows = [random_coefficients(inst, rng, **kw) for _ in range(m)]
    return NefCollection.from_combinations(inst, rows)


def random_interior(inst: LorentzInstance, rng: random.Random, hi: int = 5) -> tuple:
    """Combination of all nef generators with coefficients in ``[1, hi]``."""
    return inst.combination([rng.randint(1, hi) for _ in inst.nef_generators])


def random_positive_diagonal(d: int, rng: random.Random, hi: int = 5) -> tuple:
    return el.vec(rng.randint(1, hi) for _ in range(d))


def random_rational(rng: random.Random, lo: int = -5, hi: int = 5) -> el.mpq:
    return el.Q(rng.randint(lo, hi)) / rng.randint(1, 4)


# -- sweeps ------------------------------------------------------------------

@dataclass
class SweepResult:
    name: str
    instance: str
    trials: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def sweep_nonvanishing(inst: LorentzInstance, rng: random.Random, trials: int) -> SweepResult:
    """Direct positivity against the nd-subset criterion; ``nonvanishing``
    itself raises if the two disagree."""
    out = SweepResult("nonvanishing", inst.label, trials)
    for _ in range(trials):
        m = rng.randint(1, inst.degree)
        coll = random_collection(inst, rng, m)
        res = hodge.nonvanishing(coll)
        if (res.value > 0) != (res.violating is None):
            out.failures.append(coll.classes)
    return out


def sweep_nd(inst: LorentzInstance, rng: random.Random, trials: int, witnesses: int = 3) -> SweepResult:
    """Witness independence on ``trials`` classes and submodularity on
    ``trials`` triples."""
    out = SweepResult("nd-calculus", inst.label, trials)
    ws = [random_interior(inst, rng) for _ in range(witnesses)]
    for _ in range(trials):
        v = random_nef(inst, rng)
        hodge.nd_witness_independence(inst, v, ws, certified=True)
        x, y, z = (random_nef(inst, rng) for _ in range(3))
        sub = hodge.nd_submodularity(inst, x, y, z, certified=True)
        if not sub.holds:
            out.failures.append((x, y, z, sub.values))
    return out


def sweep_logconcavity(inst: LorentzInstance, rng: random.Random, trials: int) -> SweepResult:
    out = SweepResult("log-concavity", inst.label, trials)
    for _ in range(trials):
        a, b = random_nef(inst, rng), random_nef(inst, rng)
        res = hodge.logconcavity(inst, a, b, certified=True)
        if not res.logconcave or any(e.c is None for e in res.extremals):
            out.failures.append((a, b))
    return out


def sweep_symmetric_vs_diagonal(d: int, rng: random.Random, trials: int) -> SweepResult:
    """Polarized determinant on diagonal matrices equals the polarized monomial."""
    sym, diag = symmetric(d), diagonal(d)
    pad = d * (d - 1) // 2
    out = SweepResult("symmetric-vs-diagonal", sym.label, trials)
    for _ in range(trials):
        vs = [el.vec(random_rational(rng) for _ in range(d)) for _ in range(d)]
        lhs = sym.F(*[v + (el.ZERO,) * pad for v in vs])
        rhs = diag.F(*vs)
        if lhs != rhs:
            out.failures.append(vs)
    return out


def critical_collections_dt4() -> list:
    """All critical pairs of 0/1 classes in the diagonal torus of dimension 4."""
    inst = diagonal(4)
    vecs = [el.vec(v) for v in itertools.product((0, 1), repeat=4) if any(v)]
    found = []
    for a, b in itertools.combinations_with_replacement(vecs, 2):
        coll = NefCollection.create(inst, [a, b])
        if hodge.classify(coll).status == hodge.CRITICAL:
            found.append(coll)
    return found


def sweep_local_hii(colls) -> SweepResult:
    out = SweepResult("local-hii", "critical collections", 0)
    for coll in colls:
        for alpha in hodge.kernel(coll):
            for r in range(1, coll.m + 1):
                out.trials += 1
                cert = hodge.local_hii(coll, r, alpha)
                if not (cert.verified and hodge.recheck_local_hii(coll, cert)):
                    out.failures.append((coll.classes, r, alpha))
    return out


def run_all(trials: int = 20, s: Optional[int] = None, names=("DT3", "DT4", "SYM3")) -> list:
    rng = make_rng(s)
    results = []
    for name in names:
        inst = standard(name)
        results.append(sweep_nonvanishing(inst, rng, trials))
        results.append(sweep_nd(inst, rng, trials))
        results.append(sweep_logconcavity(inst, rng, trials))
    results.append(sweep_symmetric_vs_diagonal(3, rng, trials))
    results.append(sweep_local_hii(critical_collections_dt4()))
    return results
