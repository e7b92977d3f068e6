"""Brute-force map enumeration used as ground truth.

A labeled map is a rotation system: darts of vertex ``v`` occupy a contiguous
block and are arranged counterclockwise in increasing order, and a fixed-point
free involution pairs darts into edges. Faces are the cycles of
``rotation o pairing``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CapExceededError, DomainError
from .exact import double_factorial, to_rational

DEFAULT_DART_CAP = 24


def _vertex_of_dart(valences: Sequence[int]) -> list[int]:
    out = []
    for v, k in enumerate(valences):
        out.extend([v] * k)
    return out


def _rotation(valences: Sequence[int]) -> list[int]:
    rot = []
    start = 0
    for k in valences:
        for i in range(k):
            rot.append(start + (i + 1) % k)
        start += k
    return rot


@dataclass(frozen=True)
class RotationMap:
    valences: tuple[int, ...]
    pairing: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "valences", tuple(int(v) for v in self.valences))
        object.__setattr__(self, "pairing", tuple(int(p) for p in self.pairing))
        D = sum(self.valences)
        if D % 2:
            raise DomainError("total number of darts must be even")
        if len(self.pairing) != D:
            raise DomainError(f"pairing has {len(self.pairing)} entries, expected {D}")
        for d, p in enumerate(self.pairing):
            if p == d or not 0 <= p < D or self.pairing[p] != d:
                raise DomainError("pairing must be a fixed-point-free involution")

    @classmethod
    def from_edges(cls, valences: Sequence[int], edges: Sequence[tuple[int, int]]) -> "RotationMap":
        pairing = [-1] * sum(valences)
        for a, b in edges:
            pairing[a], pairing[b] = b, a
        return cls(tuple(valences), tuple(pairing))

    @property
    def darts(self) -> int:
        return len(self.pairing)

    @property
    def rotation(self) -> list[int]:
        return _rotation(self.valences)

    def faces(self) -> int:
        return _count_face_cycles(self.rotation, self.pairing)

    def is_connected(self) -> bool:
        vert = _vertex_of_dart(self.valences)
        parent = list(range(len(self.valences)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d, p in enumerate(self.pairing):
            parent[find(vert[d])] = find(vert[p])
        return len({find(v) for v in range(len(self.valences))}) <= 1


def _count_face_cycles(rotation: Sequence[int], pairing: Sequence[int]) -> int:
    n = len(pairing)
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        d = start
        while not seen[d]:
            seen[d] = True
            d = rotation[pairing[d]]
    return cycles


def genus_of_map(m: RotationMap) -> int:
    """Genus from Euler's formula, 2 - 2g = V - E + F."""
    V = len(m.valences)
    E = m.darts // 2
    F = m.faces()
    twice_g = 2 - V + E - F
    if twice_g % 2:
        raise DomainError("Euler characteristic parity gives a non-integral genus")
    return twice_g // 2


def min_vertices(g: int, nu: int) -> int:
    """Fewest vertices a 2nu-valent map of genus g can have."""
    if g < 0 or nu < 2:
        raise DomainError("need g >= 0 and nu >= 2")
    if g == 0:
        return 1
    return max(1, -(-(2 * g - 1) // (nu - 1)))


def labeled_to_unlabeled(count, j: int, nu) -> Fraction:
    """Divide a labeled count by (2 nu)^j j!."""
    if j < 1:
        raise DomainError("j must be >= 1")
    nu = to_rational(nu)
    if nu <= 0:
        raise DomainError("nu must be positive")
    return to_rational(count) / ((2 * nu) ** j * math.factorial(j))


@dataclass
class GenusHistogram:
    valences: tuple[int, ...]
    counts: dict[int, int] = field(default_factory=dict)
    total: int = 0
    connected_only: bool = True

    @property
    def j(self) -> int:
        return len(self.valences)

    def regular_valence(self) -> int | None:
        vals = set(self.valences)
        return vals.pop() if len(vals) == 1 else None

    def unlabeled(self, genus: int) -> Fraction | None:
        v = self.regular_valence()
        if v is None or v == 0:
            return None
        return labeled_to_unlabeled(self.counts.get(genus, 0), self.j, Fraction(v, 2))

    def rows(self) -> list[dict]:
        out = []
        for g in sorted(self.counts):
            u = self.unlabeled(g)
            out.append({
                "genus": g,
                "labeled_count": str(self.counts[g]),
                "unlabeled_count": "" if u is None else str(u),
            })
        return out

    def to_json(self) -> str:
        return json.dumps({
            "valences": list(self.valences),
            "connected_only": self.connected_only,
            "total": self.total,
            "histogram": self.rows(),
        }, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["genus", "labeled_count", "unlabeled_count"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows())
        return buf.getvalue()


class _Enumerator:
    """Recursive first-free-dart pairing with incremental connectivity pruning."""

    def __init__(self, valences: Sequence[int], connected_only: bool):
        self.valences = list(valences)
        self.D = sum(valences)
        self.V = len(valences)
        self.vert = _vertex_of_dart(valences)
        self.rot = _rotation(valences)
        self.connected_only = connected_only
        self.pairing = [-1] * self.D
        self.parent = list(range(self.V))
        self.size = [1] * self.V
        self.free = list(valences)
        self.counts: Counter = Counter()

    def _find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def _link(self, a: int, b: int):
        """Record edge between vertices a, b; returns undo info and whether
        a component just closed off without containing every vertex."""
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            self.free[ra] -= 2
            return (ra, None), self.free[ra] == 0 and self.size[ra] < self.V
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        old = self.free[ra]
        self.free[ra] += self.free[rb] - 2
        return (ra, (rb, old)), self.free[ra] == 0 and self.size[ra] < self.V

    def _unlink(self, undo):
        ra, merged = undo
        if merged is None:
            self.free[ra] += 2
            return
        rb, old = merged
        self.parent[rb] = rb
        self.size[ra] -= self.size[rb]
        self.free[ra] = old

    def _leaf(self):
        F = _count_face_cycles(self.rot, self.pairing)
        twice_g = 2 - self.V + self.D // 2 - F
        self.counts[twice_g // 2] += 1

    def run(self, first_partner: int | None = None) -> Counter:
        if self.connected_only and self.V > 1 and 0 in self.valences:
            return self.counts
        if self.D == 0:
            if not self.connected_only or self.V <= 1:
                self.counts[0 if self.V == 1 else 1 - self.V] += 1
            return self.counts
        if first_partner is None:
            self._recurse(0)
        else:
            self._pair_and_recurse(0, first_partner)
        return self.counts

    def _pair_and_recurse(self, d: int, e: int):
        self.pairing[d], self.pairing[e] = e, d
        undo, closed = self._link(self.vert[d], self.vert[e])
        if not (self.connected_only and closed):
            self._recurse(d + 1)
        self._unlink(undo)
        self.pairing[d] = self.pairing[e] = -1

    def _recurse(self, start: int):
        pairing = self.pairing
        d = start
        while d < self.D and pairing[d] != -1:
            d += 1
        if d == self.D:
            self._leaf()
            return
        for e in range(d + 1, self.D):
            if pairing[e] == -1:
                self._pair_and_recurse(d, e)


def _enumerate_partner(args) -> Counter:
    valences, connected_only, partner = args
    return _Enumerator(valences, connected_only).run(first_partner=partner)


def enumerate_matchings_by_genus(
    valences: Sequence[int],
    connected_only: bool = True,
    cap: int = DEFAULT_DART_CAP,
    workers: int = 1,
) -> GenusHistogram:
    """Histogram over genus of all dart pairings for the given vertex valences.

    With ``connected_only`` the pairings whose underlying multigraph is
    disconnected are skipped. Work can be split over processes by the partner
    of dart 0; the merged result does not depend on ``workers``.
    """
    valences = tuple(int(v) for v in valences)
    if any(v < 0 for v in valences):
        raise DomainError("valences must be nonnegative")
    D = sum(valences)
    if D % 2:
        raise DomainError(f"total number of darts {D} is odd")
    if D > cap:
        raise CapExceededError(D, cap)
    if workers > 1 and D >= 2:
        tasks = [(valences, connected_only, p) for p in range(1, D)]
        total: Counter = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_enumerate_partner, tasks):
                total.update(part)
        counts = total
    else:
        counts = _Enumerator(valences, connected_only).run()
    hist = GenusHistogram(valences, dict(sorted(counts.items())), sum(counts.values()), connected_only)
    if not connected_only and hist.total != int(double_factorial(D - 1)):
        raise AssertionError("enumeration total differs from (D-1)!!")
    return hist
