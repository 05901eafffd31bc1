"""Seeded instance families.

Randomness comes from SplitMix64 (Steele, Lea and Flood): a 64-bit state
advanced by ``0x9E3779B97F4A7C15`` and scrambled by two xor-shift-multiply
rounds. It is a few lines in any language, so instances reproduce exactly
across platforms and implementations.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from pebbling.errors import InvalidSpecError
from pebbling.graph import Dag

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` (rejection sampling, no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def sample(self, population: range | list, k: int) -> list:
        """``k`` distinct elements, by a partial Fisher-Yates shuffle."""
        pool = list(population)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


FAMILIES = (
    "chain",
    "pyramid",
    "grid",
    "binary-in-tree",
    "butterfly",
    "layered-random",
    "heavy-tail-random",
)


@dataclass(frozen=True)
class InstanceSpec:
    """Parameters of one generated instance. Which fields are read depends
    on the family:

    ========================  ==============================================
    chain                     ``n``
    pyramid                   ``height`` (rows ``height+1`` down to ``1``)
    grid                      ``height``, ``width`` (edges right and down)
    binary-in-tree            ``height`` (``2**height`` leaves)
    butterfly                 ``height`` (levels; ``2**height`` rows)
    layered-random            ``layers``, ``width``, ``degree``, ``seed``
    heavy-tail-random         ``n``, ``hub_fraction``, ``degree``, ``seed``
    ========================  ==============================================

    For heavy-tail-random, ``degree`` is the largest in-degree of an
    ordinary vertex; hubs get in-degree above ``log2 m``.
    """

    family: str
    n: int | None = None
    height: int | None = None
    width: int | None = None
    layers: int | None = None
    degree: int = 2
    hub_fraction: float = 0.05
    seed: int = 0

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_json(cls, data: dict) -> InstanceSpec:
        return cls(**data)

    def label(self) -> str:
        keys = ("n", "height", "width", "layers")
        size = ",".join(f"{k}={getattr(self, k)}" for k in keys if getattr(self, k) is not None)
        return f"{self.family}({size})"


def _need(spec: InstanceSpec, field: str, lo: int) -> int:
    val = getattr(spec, field)
    if val is None or not isinstance(val, int) or val < lo:
        raise InvalidSpecError(f"{spec.family}: '{field}' must be an integer >= {lo}, got {val!r}")
    return val


def generate(spec: InstanceSpec) -> Dag:
    fam = spec.family
    if fam == "chain":
        n = _need(spec, "n", 1)
        return Dag(range(n), [(i, i + 1) for i in range(n - 1)])
    if fam == "pyramid":
        return _pyramid(_need(spec, "height", 0))
    if fam == "grid":
        h, w = _need(spec, "height", 1), _need(spec, "width", 1)
        edges = [(i * w + j, i * w + j + 1) for i in range(h) for j in range(w - 1)]
        edges += [(i * w + j, (i + 1) * w + j) for i in range(h - 1) for j in range(w)]
        return Dag(range(h * w), edges)
    if fam == "binary-in-tree":
        h = _need(spec, "height", 0)
        n = (1 << (h + 1)) - 1
        # Heap layout reversed: vertex 0.. are leaves, the root is last.
        edges = [(n - 1 - c, n - 1 - (c - 1) // 2) for c in range(1, n)]
        return Dag(range(n), edges)
    if fam == "butterfly":
        k = _need(spec, "height", 0)
        rows = 1 << k
        edges = []
        for lvl in range(k):
            for i in range(rows):
                edges.append((lvl * rows + i, (lvl + 1) * rows + i))
                edges.append((lvl * rows + i, (lvl + 1) * rows + (i ^ (1 << lvl))))
        return Dag(range((k + 1) * rows), edges)
    if fam == "layered-random":
        return _layered(spec)
    if fam == "heavy-tail-random":
        return _heavy_tail(spec)
    raise InvalidSpecError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")


def _pyramid(h: int) -> Dag:
    ids: dict[tuple[int, int], int] = {}
    edges = []
    for r in range(h + 1):
        for i in range(h + 1 - r):
            ids[r, i] = len(ids)
            if r:
                edges.append((ids[r - 1, i], ids[r, i]))
                edges.append((ids[r - 1, i + 1], ids[r, i]))
    return Dag(range(len(ids)), edges)


def _layered(spec: InstanceSpec) -> Dag:
    layers, width = _need(spec, "layers", 1), _need(spec, "width", 1)
    d = _need(spec, "degree", 1)
    rng = SplitMix64(spec.seed)
    edges = []
    for lay in range(1, layers):
        prev = range((lay - 1) * width, lay * width)
        for i in range(width):
            v = lay * width + i
            k = rng.between(1, min(d, width))
            edges += [(u, v) for u in rng.sample(prev, k)]
    return Dag(range(layers * width), edges)


def _heavy_tail(spec: InstanceSpec) -> Dag:
    n = _need(spec, "n", 8)
    d = _need(spec, "degree", 1)
    if not 0 < spec.hub_fraction <= 0.5:
        raise InvalidSpecError("heavy-tail-random: hub_fraction must lie in (0, 0.5]")
    rng = SplitMix64(spec.seed)
    hubs = set(rng.sample(range(n // 2, n), max(1, round(spec.hub_fraction * n))))
    edges = []
    for v in range(1, n):
        if v not in hubs:
            k = rng.between(0, min(d, v))
            edges += [(u, v) for u in rng.sample(range(v), k)]
    # Hub in-degree: smallest h with 2**h > m after adding every hub edge.
    h = 1
    while (1 << h) <= len(edges) + len(hubs) * h:
        h += 1
    if h > n // 2:
        raise InvalidSpecError("heavy-tail-random: n too small for hubs above log2 m")
    for v in sorted(hubs):
        edges += [(u, v) for u in rng.sample(range(v), h)]
    return Dag(range(n), edges)
