"""Loopless matroids on the ground set {1, ..., n}, given by their bases."""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Optional

from .errors import InputError


def _poly_sub(p: list, q: list) -> list:
    """Difference of coefficient lists in descending powers."""
    n = max(len(p), len(q))
    p = [0] * (n - len(p)) + p
    q = [0] * (n - len(q)) + q
    out = [a - b for a, b in zip(p, q)]
    while len(out) > 1 and out[0] == 0:
        out.pop(0)
    return out


def _times_lambda_minus_one(p: list) -> list:
    return _poly_sub(p + [0], [0] + p)


class Matroid:
    def __init__(self, n: int, bases: Iterable[Iterable[int]], check: bool = True):
        if not isinstance(n, int) or n < 1:
            raise InputError("ground set size must be a positive integer", "ground_set")
        self.n = n
        self.ground = frozenset(range(1, n + 1))
        bs = []
        for k, b in enumerate(bases):
            b = frozenset(b)
            if not b <= self.ground:
                raise InputError(f"basis {sorted(b)} leaves the ground set", f"bases[{k}]")
            bs.append(b)
        self.bases = frozenset(bs)
        if not self.bases:
            raise InputError("a matroid needs at least one basis", "bases")
        sizes = {len(b) for b in self.bases}
        if len(sizes) != 1:
            raise InputError("bases have different sizes", "bases")
        self.r = sizes.pop()
        self._rank_cache: dict = {}
        self._flats: Optional[list] = None
        if check:
            self._check_exchange()
            loops = sorted(self.ground - frozenset().union(*self.bases))
            if loops:
                raise InputError(f"element {loops[0]} is a loop", "bases", witness=loops)

    # -- constructors --------------------------------------------------------

    @classmethod
    def uniform(cls, r: int, n: int) -> "Matroid":
        if not (0 <= r <= n):
            raise InputError("uniform matroid needs 0 <= r <= n", "uniform")
        return cls(n, itertools.combinations(range(1, n + 1), r), check=False)

    @classmethod
    def graphic(cls, edges) -> "Matroid":
        edges = [tuple(e) for e in edges]
        for k, e in enumerate(edges):
            if len(e) != 2:
                raise InputError("edge must have two endpoints", f"graphic_edges[{k}]")
            if e[0] == e[1]:
                raise InputError("self-loop gives a matroid loop", f"graphic_edges[{k}]")
        verts = sorted({v for e in edges for v in e}, key=repr)
        if not edges:
            raise InputError("graph has no edges", "graphic_edges")

        def forest_rank(sub):
            parent = {v: v for v in verts}

            def find(v):
                while parent[v] != v:
                    parent[v] = parent[parent[v]]
                    v = parent[v]
                return v

            r = 0
            for i in sub:
                a, b = find(edges[i][0]), find(edges[i][1])
                if a != b:
                    parent[a] = b
                    r += 1
            return r

        full = forest_rank(range(len(edges)))
        bases = [tuple(i + 1 for i in sub)
                 for sub in itertools.combinations(range(len(edges)), full)
                 if forest_rank(sub) == full]
        return cls(len(edges), bases, check=False)

    @classmethod
    def from_json(cls, obj) -> "Matroid":
        if not isinstance(obj, dict):
            raise InputError("matroid must be a JSON object", "matroid")
        if "uniform" in obj:
            u = obj["uniform"]
            if not (isinstance(u, list) and len(u) == 2 and all(isinstance(x, int) for x in u)):
                raise InputError("expected [r, n]", "uniform")
            m = cls.uniform(*u)
            m._check_loopless()
            return m
        if "graphic_edges" in obj:
            e = obj["graphic_edges"]
            if not isinstance(e, list):
                raise InputError("expected a list of edges", "graphic_edges")
            return cls.graphic(e)
        if "ground_set" in obj and "bases" in obj:
            n, bases = obj["ground_set"], obj["bases"]
            if not isinstance(bases, list) or not all(isinstance(b, list) for b in bases):
                raise InputError("expected a list of lists", "bases")
            for k, b in enumerate(bases):
                if not all(isinstance(x, int) and not isinstance(x, bool) for x in b):
                    raise InputError("elements must be integers", f"bases[{k}]")
                if len(set(b)) != len(b):
                    raise InputError("repeated element", f"bases[{k}]")
            return cls(n, bases)
        raise InputError("need 'uniform', 'graphic_edges', or 'ground_set' with 'bases'", "matroid")

    def to_json(self) -> dict:
        return {"ground_set": self.n, "bases": sorted(sorted(b) for b in self.bases)}

    def _check_loopless(self):
        loops = sorted(self.ground - frozenset().union(*self.bases))
        if loops:
            raise InputError(f"element {loops[0]} is a loop", "bases", witness=loops)

    def _check_exchange(self):
        for b1 in self.bases:
            for b2 in self.bases:
                for x in b1 - b2:
                    if not any((b1 - {x}) | {y} in self.bases for y in b2 - b1):
                        raise InputError(
                            f"basis exchange fails for {sorted(b1)}, {sorted(b2)} at {x}",
                            "bases", witness=(sorted(b1), sorted(b2), x))

    # -- rank and flats ------------------------------------------------------

    def rank(self, s: Iterable[int] = None) -> int:
        s = self.ground if s is None else frozenset(s)
        if not s <= self.ground:
            bad = sorted(s - self.ground)
            raise InputError(f"element {bad[0]} not in ground set")
        if s not in self._rank_cache:
            self._rank_cache[s] = max(len(s & b) for b in self.bases)
        return self._rank_cache[s]

    def closure(self, s: Iterable[int]) -> frozenset:
        s = frozenset(s)
        r = self.rank(s)
        return frozenset(s | {e for e in self.ground - s if self.rank(s | {e}) == r})

    def is_flat(self, s: Iterable[int]) -> bool:
        s = frozenset(s)
        return self.closure(s) == s

    def flats(self) -> list:
        if self._flats is None:
            seen = {self.closure(())}
            frontier = list(seen)
            while frontier:
                nxt = []
                for f in frontier:
                    for e in sorted(self.ground - f):
                        g = self.closure(f | {e})
                        if g not in seen:
                            seen.add(g)
                            nxt.append(g)
                frontier = nxt
            self._flats = sorted(seen, key=lambda f: (len(f), sorted(f)))
        return list(self._flats)

    def proper_flats(self) -> list:
        return [f for f in self.flats() if f and f != self.ground]

    def flags_of_proper_flats(self, k: int) -> list:
        """Strictly increasing chains ``F_1 < ... < F_k`` of proper flats."""
        if not (1 <= k <= self.r - 1):
            raise InputError(f"chain length must lie in [1, {self.r - 1}]")
        flats = self.proper_flats()
        chains = [[f] for f in flats]
        for _ in range(k - 1):
            chains = [c + [g] for c in chains for g in flats if c[-1] < g]
        return [tuple(c) for c in chains]

    # -- characteristic polynomial ------------------------------------------

    def characteristic_polynomial(self) -> list:
        """Integer coefficients of the characteristic polynomial, highest power first.

        Deletion-contraction over minors ``M / C \\ D`` with memoization.
        """
        ground = self.ground

        @lru_cache(maxsize=None)
        def chi(contracted: frozenset, deleted: frozenset) -> tuple:
            rest = ground - contracted - deleted
            if not rest:
                return (1,)
            rc = self.rank(contracted)
            e = min(rest)
            if self.rank(contracted | {e}) == rc:
                return (0,)
            total = self.rank(contracted | rest)
            if self.rank(contracted | (rest - {e})) < total:
                return tuple(_times_lambda_minus_one(list(chi(contracted | {e}, deleted))))
            return tuple(_poly_sub(list(chi(contracted, deleted | {e})),
                                   list(chi(contracted | {e}, deleted))))

        return list(chi(frozenset(), frozenset()))

    def reduced_characteristic_polynomial(self) -> list:
        """Quotient of the characteristic polynomial by ``(lambda - 1)``."""
        p = self.characteristic_polynomial()
        out, carry = [], 0
        for c in p[:-1]:
            carry = c + carry
            out.append(carry)
        if carry + p[-1] != 0:
            raise ArithmeticError("characteristic polynomial not divisible by lambda - 1")
        return out

    def mu_sequence(self) -> list:
        """Unsigned coefficients of the reduced characteristic polynomial."""
        return [abs(c) for c in self.reduced_characteristic_polynomial()]

    def __repr__(self):
        return f"Matroid(n={self.n}, rank={self.r}, bases={len(self.bases)})"
