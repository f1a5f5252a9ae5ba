import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgekit import exactlin as el

Q = el.Q
small = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def symmetric(n):
    return square(n).map(lambda a: [[a[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)])


# -- oracles ----------------------------------------------------------------

def fm_feasible(cons):
    """Fourier-Motzkin elimination on non-strict rows ``a.x <= b``."""
    rows = []
    for a, sense, b in cons:
        a = [Fraction(int(x)) for x in a]
        b = Fraction(int(b))
        if sense in ("<=", "=="):
            rows.append((a, b))
        if sense in (">=", "=="):
            rows.append(([-x for x in a], -b))
    n = len(rows[0][0]) if rows else 0
    for k in range(n):
        pos = [r for r in rows if r[0][k] > 0]
        neg = [r for r in rows if r[0][k] < 0]
        keep = [r for r in rows if r[0][k] == 0]
        for (a, b), (c, d) in itertools.product(pos, neg):
            s, t = -c[k], a[k]
            keep.append(([s * x + t * y for x, y in zip(a, c)], s * b + t * d))
        rows = keep
    return all(b >= 0 for _, b in rows)


def det(m):
    n = len(m)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * Fraction(int(m[0][j])) * det(minor)
    return total


def signature_by_minors_sign_changes(m):
    """Jacobi: sign changes in leading principal minors, valid when none vanish."""
    n = len(m)
    minors = [det([row[:k] for row in m[:k]]) for k in range(n + 1)]
    if any(x == 0 for x in minors):
        return None
    neg = sum(1 for a, b in zip(minors, minors[1:]) if a * b < 0)
    return n - neg, neg, 0


# -- examples ---------------------------------------------------------------

def test_signature_examples():
    eye = [[int(i == j) for j in range(3)] for i in range(3)]
    assert el.signature(eye) == (3, 0, 0)
    assert el.signature([[0] * 3 for _ in range(3)]) == (0, 0, 3)
    jmi = [[int(i != j) for j in range(3)] for i in range(3)]
    assert el.signature(jmi) == (1, 2, 0)


def test_signature_rejects_asymmetric():
    with pytest.raises(ValueError):
        el.signature([[1, 2], [3, 4]])


def test_nullspace_examples():
    assert el.nullspace([[1, 0], [0, 1]]) == []
    assert el.nullspace([[0, 0], [0, 0]]) == [el.vec((1, 0)), el.vec((0, 1))]
    m = [[0, 0, Q(1) / 6], [0, 0, Q(1) / 6], [Q(1) / 6, Q(1) / 6, 0]]
    assert el.nullspace(m) == [el.vec((1, -1, 0))]


def test_solve_affine_examples():
    assert el.solve_affine([[0, 0, 0]], [0], fixed={0: 5}) == el.vec((5, 0, 0))
    assert el.solve_affine([[2]], [3]) == (Q(3) / 2,)
    assert el.solve_affine([[1, 1], [1, 1]], [0, 1]) is None


def test_lp_examples():
    assert not el.lp_feasible([((1,), ">=", 0), ((1,), "<=", -1)])
    res = el.lp_feasible([((1, 0), ">=", 1), ((-1, 1), ">=", 0)])
    assert res and res.witness[0] >= 1 and res.witness[1] >= res.witness[0]


def test_lp_strict():
    assert not el.lp_feasible([((1,), ">", 0), ((1,), "<", 0)])
    res = el.lp_feasible([((1,), ">", 0), ((1,), "<", 1)])
    assert res and 0 < res.witness[0] < 1
    assert not el.lp_feasible([((1, -1), ">", 0), ((-1, 1), ">=", 0)])


def test_quotient_map():
    q = el.QuotientMap([(1, 1, 1)], 3)
    assert q.quotient_dim == 2
    assert q((1, 1, 1)) == el.zeros(2)
    assert q(q.lift((3, 4))) == el.vec((3, 4))


def test_primitive_integral():
    lam, v = el.primitive_integral((Q(1) / 2, Q(-3) / 4))
    assert v == el.vec((2, -3)) and lam == 4


# -- properties -------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(symmetric(4), square(4))
def test_signature_congruence_invariant(m, p):
    if det(p) == 0:
        return
    pt = el.transpose(p)
    assert el.signature(el.matmul(el.matmul(pt, m), p)) == el.signature(m)


@settings(max_examples=150, deadline=None)
@given(symmetric(4))
def test_signature_matches_jacobi_and_rank(m):
    s = el.signature(m)
    assert s[0] + s[1] == el.rank(m)
    jac = signature_by_minors_sign_changes(m)
    if jac is not None:
        assert s == jac


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_rank_nullity(m):
    ns = el.nullspace(m)
    assert el.rank(m) + len(ns) == 5
    for v in ns:
        assert el.is_zero(el.matvec(m, v))


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4),
       st.lists(small, min_size=4, max_size=4))
def test_solve_affine_consistent_systems(m, x):
    b = el.matvec(m, el.vec(x))
    z = el.solve_affine(m, b, fixed={0: x[0]})
    assert z is not None and z[0] == x[0]
    assert el.matvec(m, z) == b


@settings(max_examples=120, deadline=None)
@given(st.lists(st.tuples(st.lists(small, min_size=2, max_size=2),
                          st.sampled_from(["<=", ">=", "=="]), small),
                min_size=1, max_size=5))
def test_lp_agrees_with_fourier_motzkin(cons):
    res = el.lp_feasible(cons)
    assert bool(res) == fm_feasible(cons)
    if res:
        assert el.check_constraints(cons, res.witness)
