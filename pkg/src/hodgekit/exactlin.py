"""Exact rational linear algebra and LP feasibility.

Every routine works over ``gmpy2.mpq``; nothing here ever rounds.  Matrices
are plain lists of rows, vectors are tuples.  Pivoting is always lowest
index first so that outputs are reproducible.
"""
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)


def Q(x) -> mpq:
    """Coerce ints, strings like ``"-3/4"`` and rationals to ``mpq``."""
    if isinstance(x, str):
        s = x.strip().replace("−", "-")
        if not s:
            raise ValueError("empty scalar")
        return mpq(s)
    if isinstance(x, float):
        raise TypeError("floating point scalars are not accepted")
    return mpq(x)


def vec(xs: Iterable) -> tuple:
    return tuple(Q(x) for x in xs)


def matrix(rows: Iterable[Iterable]) -> list:
    out = [list(vec(r)) for r in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def zeros(n: int) -> tuple:
    return (ZERO,) * n


def unit(n: int, i: int) -> tuple:
    return tuple(ONE if j == i else ZERO for j in range(n))


def dot(u: Sequence, v: Sequence) -> mpq:
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v) -> tuple:
    c = Q(c)
    return tuple(c * a for a in v)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence], dim: Optional[int] = None) -> tuple:
    if dim is None:
        dim = len(vectors[0])
    out = [ZERO] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for j, a in enumerate(v):
                if a:
                    out[j] += c * a
    return tuple(out)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def leading_one(v: Sequence) -> tuple:
    lead = next((a for a in v if a != 0), None)
    if lead is None or lead == 1:
        return tuple(v)
    return tuple(a / lead for a in v)


def transpose(m: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*m)]


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    bt = transpose(b)
    return [[dot(row, col) for col in bt] for row in a]


def is_symmetric(m: Sequence[Sequence]) -> bool:
    n = len(m)
    if any(len(r) != n for r in m):
        return False
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


# -- elimination -------------------------------------------------------------

def rref(m: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form and pivot columns."""
    a = [list(map(Q, r)) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                ai, ar = a[i], a[r]
                for j in range(c, cols):
                    if ar[j]:
                        ai[j] -= f * ar[j]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence], ncols: Optional[int] = None) -> list:
    """Basis of ``{v : m v = 0}``; one vector per free column.

    Each vector is scaled so that its first nonzero entry is 1.
    """
    if not m:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [unit(ncols, j) for j in range(ncols)]
    r, pivots = rref(m)
    cols = len(r[0])
    free = [j for j in range(cols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for row, p in enumerate(pivots):
            v[p] = -r[row][f]
        basis.append(leading_one(v))
    return basis


def row_space_basis(vectors: Sequence[Sequence], dim: Optional[int] = None) -> list:
    """Canonical (RREF) basis of the span of ``vectors``."""
    vectors = [v for v in vectors]
    if not vectors:
        return []
    r, pivots = rref(vectors)
    return [tuple(r[i]) for i in range(len(pivots))]


def same_span(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    return row_space_basis(a) == row_space_basis(b)


def span_contains(vectors: Sequence[Sequence], target: Sequence) -> bool:
    return express_in(vectors, target) is not None


def express_in(vectors: Sequence[Sequence], target: Sequence) -> Optional[tuple]:
    """Coefficients ``c`` with ``sum c_i vectors[i] == target``, or None."""
    target = vec(target)
    if not vectors:
        return () if is_zero(target) else None
    cols = transpose(vectors)
    return solve_affine(cols, target)


def solve_affine(m: Sequence[Sequence], b: Sequence, fixed: Optional[dict] = None,
                 rows: Optional[Iterable[int]] = None) -> Optional[tuple]:
    """Solve ``m z = b`` with some coordinates of ``z`` prescribed.

    ``fixed`` maps coordinate index to value; ``rows`` restricts which
    equations must hold (default: all).  Free coordinates that are not pivots
    are set to zero, giving a basic solution under lowest-index pivoting.
    Returns None when the system is inconsistent.
    """
    fixed = {k: Q(v) for k, v in (fixed or {}).items()}
    m = [list(map(Q, r)) for r in m]
    b = vec(b)
    if rows is not None:
        keep = sorted(set(rows))
        m = [m[i] for i in keep]
        b = tuple(b[i] for i in keep)
    ncols = len(m[0]) if m else None
    if ncols is None:
        if fixed:
            ncols = max(fixed) + 1
        else:
            return ()
    free = [j for j in range(ncols) if j not in fixed]
    rhs = []
    for row, bi in zip(m, b):
        rhs.append(bi - sum((row[j] * v for j, v in fixed.items()), ZERO))
    z = [ZERO] * ncols
    for j, v in fixed.items():
        if j >= ncols:
            raise IndexError(f"fixed coordinate {j} out of range")
        z[j] = v
    if not m:
        return tuple(z)
    aug = [[row[j] for j in free] + [r] for row, r in zip(m, rhs)]
    red, pivots = rref(aug)
    nfree = len(free)
    if nfree in pivots:
        return None
    for i, p in enumerate(pivots):
        z[free[p]] = red[i][nfree]
    return tuple(z)


def solve(m: Sequence[Sequence], b: Sequence) -> Optional[tuple]:
    return solve_affine(m, b)


# -- inertia -----------------------------------------------------------------

def signature(m: Sequence[Sequence]) -> tuple[int, int, int]:
    """Sylvester inertia ``(n_plus, n_minus, n_zero)`` by congruence.

    Diagonal pivots are used when available.  When every remaining diagonal
    entry vanishes but an off-diagonal entry ``b`` survives, the 2x2 block
    ``[[0, b], [b, 0]]`` is split off; it contributes one positive and one
    negative square.
    """
    if not is_symmetric(m):
        raise ValueError("signature needs a symmetric matrix")
    a = [list(map(Q, r)) for r in m]
    idx = list(range(len(a)))
    pos = neg = 0
    while idx:
        p = next((i for i in idx if a[i][i] != 0), None)
        if p is not None:
            d = a[p][p]
            if d > 0:
                pos += 1
            else:
                neg += 1
            idx.remove(p)
            row = a[p]
            for i in idx:
                if row[i] == 0:
                    continue
                f = row[i] / d
                ai = a[i]
                for j in idx:
                    if row[j]:
                        ai[j] -= f * row[j]
            continue
        pair = next(((i, j) for i in idx for j in idx if j > i and a[i][j] != 0), None)
        if pair is None:
            break
        i0, j0 = pair
        bb = a[i0][j0]
        pos += 1
        neg += 1
        idx.remove(i0)
        idx.remove(j0)
        # Schur complement of [[0, b], [b, 0]]: A - C B^{-1} C^T, B^{-1} = [[0, 1/b], [1/b, 0]]
        ci = [a[k][i0] for k in range(len(a))]
        cj = [a[k][j0] for k in range(len(a))]
        for k in idx:
            if ci[k] == 0 and cj[k] == 0:
                continue
            ak = a[k]
            for l in idx:
                delta = ci[k] * cj[l] + cj[k] * ci[l]
                if delta:
                    ak[l] -= delta / bb
    n = len(a)
    return pos, neg, n - pos - neg


# -- linear programming ------------------------------------------------------

Constraint = namedtuple("Constraint", "coeffs sense rhs")

_SENSES = {"<=", ">=", "==", "<", ">"}


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.feasible


def check_constraints(constraints: Sequence, x: Sequence) -> bool:
    for coeffs, sense, rhs in constraints:
        lhs = dot(vec(coeffs), x)
        rhs = Q(rhs)
        ok = {
            "<=": lhs <= rhs,
            ">=": lhs >= rhs,
            "==": lhs == rhs,
            "<": lhs < rhs,
            ">": lhs > rhs,
        }[sense]
        if not ok:
            return False
    return True


def lp_feasible(constraints: Sequence, nvars: Optional[int] = None) -> LPResult:
    """Decide feasibility of affine constraints over free rational variables.

    Each constraint is ``(coeffs, sense, rhs)`` with sense one of
    ``<= >= == < >``.  Strict rows are handled by maximizing a common slack
    ``t <= 1``; the system is feasible iff the optimum is positive.  Every
    FEASIBLE answer is re-checked by substitution before it is returned.
    """
    cons = []
    for c in constraints:
        coeffs, sense, rhs = c
        if sense not in _SENSES:
            raise ValueError(f"unknown constraint sense {sense!r}")
        cons.append((vec(coeffs), sense, Q(rhs)))
    if nvars is None:
        if not cons:
            return LPResult(True, ())
        nvars = len(cons[0][0])
    if any(len(c[0]) != nvars for c in cons):
        raise ValueError("constraint width mismatch")
    strict = any(s in ("<", ">") for _, s, _ in cons)

    # Standard form variables: x+ (nvars), x- (nvars), [t], one slack per inequality.
    ineq = [i for i, (_, s, _) in enumerate(cons) if s != "=="]
    nx = 2 * nvars
    tcol = nx if strict else None
    base = nx + (1 if strict else 0)
    slack_of = {i: base + k for k, i in enumerate(ineq)}
    extra_tbound = strict
    ncols = base + len(ineq) + (1 if extra_tbound else 0)
    rows, rhs = [], []
    for i, (a, s, b) in enumerate(cons):
        sign = -1 if s in (">=", ">") else 1
        row = [ZERO] * ncols
        for j, aj in enumerate(a):
            row[j] = sign * aj
            row[nvars + j] = -sign * aj
        if s in ("<", ">"):
            row[tcol] = ONE
        if s != "==":
            row[slack_of[i]] = ONE
        rows.append(row)
        rhs.append(sign * b)
    if extra_tbound:
        row = [ZERO] * ncols
        row[tcol] = ONE
        row[ncols - 1] = ONE
        rows.append(row)
        rhs.append(ONE)

    res = _simplex(rows, rhs, objective=({tcol: ONE} if strict else None))
    if res is None:
        return LPResult(False)
    y, opt = res
    if strict and opt <= 0:
        return LPResult(False)
    x = tuple(y[j] - y[nvars + j] for j in range(nvars))
    if not check_constraints(cons, x):
        raise ArithmeticError("LP witness failed exact substitution")
    return LPResult(True, x)


def _simplex(rows: list, rhs: list, objective: Optional[dict] = None):
    """Two-phase tableau simplex with Bland's rule, variables >= 0.

    Returns ``(solution, objective_value)`` for ``max objective`` over
    ``rows y == rhs``; None when infeasible.  Unbounded objectives cannot
    occur for the callers here (the slack is capped).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    t = []
    for r, b in zip(rows, rhs):
        if b < 0:
            r = [-x for x in r]
            b = -b
        t.append(list(r) + [ZERO] * m + [b])
    art = list(range(n, n + m))
    for i in range(m):
        t[i][n + i] = ONE
    basis = list(art)
    width = n + m

    def pivot(pr, pc):
        row = t[pr]
        inv = 1 / row[pc]
        t[pr] = row = [x * inv for x in row]
        for i in range(m):
            if i != pr and t[i][pc] != 0:
                f = t[i][pc]
                ti = t[i]
                for j in range(width + 1):
                    if row[j]:
                        ti[j] -= f * row[j]
        basis[pr] = pc

    def run(cost, allowed):
        # maximize cost . y ; reduced costs computed on the fly
        while True:
            cb = [cost.get(basis[i], ZERO) for i in range(m)]
            enter = None
            for j in allowed:
                if j in basis:
                    continue
                rc = cost.get(j, ZERO) - sum((cb[i] * t[i][j] for i in range(m) if cb[i] and t[i][j]), ZERO)
                if rc > 0:
                    enter = j
                    break
            if enter is None:
                return
            best = None
            for i in range(m):
                a = t[i][enter]
                if a > 0:
                    ratio = t[i][width] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                raise ArithmeticError("unbounded LP")
            pivot(best[1], enter)

    run({j: -ONE for j in art}, range(width))
    if any(t[i][width] != 0 for i in range(m) if basis[i] >= n):
        return None
    # drive zero-level artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if t[i][j] != 0 and j not in basis), None)
            if j is not None:
                pivot(i, j)
    keep = [i for i in range(m) if basis[i] < n]
    t = [t[i] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(t)
    if objective:
        run(objective, range(n))
    y = [ZERO] * n
    for i in range(m):
        y[basis[i]] = t[i][width]
    val = sum((c * y[j] for j, c in (objective or {}).items()), ZERO)
    return y, val


def inverse(m: Sequence[Sequence]) -> list:
    n = len(m)
    aug = [list(map(Q, row)) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def left_inverse(cols: Sequence[Sequence]) -> list:
    """For linearly independent columns ``cols`` (given as a list of vectors),
    a matrix ``L`` with ``L U = I`` where ``U`` has those columns."""
    if not cols:
        return []
    gram = [[dot(a, b) for b in cols] for a in cols]
    return matmul(inverse(gram), cols)


class QuotientMap:
    """Coordinates on ``R^dim / span(subspace)``.

    The subspace is put in reduced echelon form; a vector is reduced by
    clearing the pivot entries and its remaining entries are the quotient
    coordinates.  A linear functional vanishing on the subspace induces the
    quotient functional given by its non-pivot entries.
    """

    def __init__(self, subspace: Sequence[Sequence], dim: int):
        self.dim = dim
        rows = [vec(v) for v in subspace if not is_zero(v)]
        if rows:
            red, piv = rref(rows)
            self.rows = [tuple(red[i]) for i in range(len(piv))]
            self.pivots = tuple(piv)
        else:
            self.rows, self.pivots = [], ()
        pset = set(self.pivots)
        self.free = tuple(j for j in range(dim) if j not in pset)

    @property
    def quotient_dim(self) -> int:
        return len(self.free)

    def reduce(self, x: Sequence) -> tuple:
        y = list(vec(x))
        for r, p in zip(self.rows, self.pivots):
            c = y[p]
            if c:
                for j, a in enumerate(r):
                    if a:
                        y[j] -= c * a
        return tuple(y)

    def __call__(self, x: Sequence) -> tuple:
        y = self.reduce(x)
        return tuple(y[j] for j in self.free)

    def lift(self, y: Sequence) -> tuple:
        out = [ZERO] * self.dim
        for j, a in zip(self.free, y):
            out[j] = Q(a)
        return tuple(out)

    def functional(self, g: Sequence) -> tuple:
        return tuple(Q(g[j]) for j in self.free)


def primitive_integral(v: Sequence) -> tuple:
    """``(lam, lam * v)`` with ``lam > 0`` and ``lam * v`` primitive integral."""
    v = vec(v)
    if is_zero(v):
        raise ValueError("zero vector has no primitive multiple")
    den = 1
    for a in v:
        den = lcm(den, int(a.denominator))
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    lam = mpq(den, g)
    return lam, tuple(mpq(a // g) for a in ints)
