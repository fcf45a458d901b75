"""Instances, the counting comparison oracle, and instance generators.

An instance is n colored balls, identified by the indices 1..n.  Algorithms
never see colors; the only way to learn anything is CountingOracle.cmp(x, y),
which answers "same color?" and bills one comparison for every call.  The
oracle can optionally record a transcript of (x, y, equal) triples, which is
what the certificate auditing in `certify` consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .rng import RandomStream

# Above this size, generation draws colors in bulk through numpy; the colors
# differ from the scalar path's but determinism per stream is preserved.
_BULK_THRESHOLD = 4096

__all__ = [
    "Instance",
    "ComparisonRecord",
    "CountingOracle",
    "DistributionSpec",
    "parse_distribution",
    "generate",
    "relabel",
    "read_instance",
    "write_instance",
]


@dataclass(frozen=True)
class Instance:
    """Immutable multiset of colored balls; colors are opaque unsigned ints."""

    colors: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.colors):
            raise ValueError("color ids must be unsigned")

    @property
    def n(self) -> int:
        return len(self.colors)

    def color_of(self, ball: int) -> int:
        """Color of a 1-based ball index. Test/generator privilege only."""
        return self.colors[ball - 1]


class ComparisonRecord(NamedTuple):
    left: int
    right: int
    equal: bool


class CountingOracle:
    """Comparison oracle over one instance.

    Counts every call, including repeated and self-comparisons: the cost
    model charges for asking, not for learning something new, so there is
    deliberately no memoization.  cmp(x, x) returns True and costs 1.
    """

    __slots__ = ("instance", "_colors", "_n", "comparisons", "_transcript")

    def __init__(self, instance: Instance, record_transcript: bool = False):
        self.instance = instance
        self._colors = instance.colors
        self._n = len(instance.colors)
        self.comparisons = 0
        self._transcript: list[ComparisonRecord] | None = (
            [] if record_transcript else None
        )

    def cmp(self, x: int, y: int) -> bool:
        if not (1 <= x <= self._n and 1 <= y <= self._n):
            raise IndexError(f"ball index out of range: cmp({x}, {y}) with n={self._n}")
        self.comparisons += 1
        equal = self._colors[x - 1] == self._colors[y - 1]
        if self._transcript is not None:
            self._transcript.append(ComparisonRecord(x, y, equal))
        return equal

    @property
    def recording(self) -> bool:
        return self._transcript is not None

    @property
    def transcript(self) -> list[ComparisonRecord]:
        if self._transcript is None:
            raise ValueError("transcript recording was not enabled")
        return self._transcript


# ----------------------------------------------------------------------
# Instance generation
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DistributionSpec:
    """Parsed form of a distribution string.

    kind: "binary" | "profile" | "distinct" | "uniform"
    """

    kind: str
    p: float = 0.5                       # binary
    fractions: tuple[float, ...] = ()    # profile (fractions variant)
    counts: tuple[int, ...] = ()         # profile (exact counts variant)
    rest_colors: int = 0                 # profile: spread remainder over this many colors
    k: int | None = None                 # uniform; None means k = n

    def describe(self) -> str:
        if self.kind == "binary":
            return f"binary:p={self.p:g}"
        if self.kind == "distinct":
            return "distinct"
        if self.kind == "uniform":
            return f"uniform:k={self.k if self.k is not None else 'n'}"
        if self.counts:
            body = ",".join(str(c) for c in self.counts)
        else:
            body = ",".join(f"{f:g}" for f in self.fractions)
        if self.rest_colors:
            body += f",rest={self.rest_colors}"
        return f"profile:{body}"


def parse_distribution(text: str) -> DistributionSpec:
    """Parse the CLI distribution grammar.

    binary:p=0.5 | profile:0.48,rest=100 | profile:5,3 | distinct | uniform:k=64
    """
    text = text.strip()
    head, _, body = text.partition(":")
    head = head.strip().lower()

    if head == "distinct":
        if body:
            raise ValueError("distinct takes no arguments")
        return DistributionSpec(kind="distinct")

    if head == "binary":
        p = 0.5
        if body:
            key, _, val = body.partition("=")
            if key.strip() != "p":
                raise ValueError(f"binary expects p=..., got {body!r}")
            p = float(val)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"binary p must be in [0,1], got {p}")
        return DistributionSpec(kind="binary", p=p)

    if head == "uniform":
        if not body:
            return DistributionSpec(kind="uniform", k=None)
        key, _, val = body.partition("=")
        if key.strip() != "k":
            raise ValueError(f"uniform expects k=..., got {body!r}")
        val = val.strip()
        if val == "n":
            return DistributionSpec(kind="uniform", k=None)
        k = int(val)
        if k < 1:
            raise ValueError("uniform k must be >= 1")
        return DistributionSpec(kind="uniform", k=k)

    if head == "profile":
        if not body:
            raise ValueError("profile needs at least one weight")
        rest = 0
        parts = [p.strip() for p in body.split(",") if p.strip()]
        weights: list[str] = []
        for part in parts:
            if part.startswith("rest="):
                rest = int(part[5:])
                if rest < 1:
                    raise ValueError("rest must be >= 1")
            else:
                weights.append(part)
        if not weights:
            raise ValueError("profile needs at least one weight")
        if all("." not in w and "e" not in w.lower() for w in weights):
            counts = tuple(int(w) for w in weights)
            if rest:
                raise ValueError("rest= only applies to fractional profiles")
            if any(c < 0 for c in counts):
                raise ValueError("profile counts must be nonnegative")
            return DistributionSpec(kind="profile", counts=counts)
        fractions = tuple(float(w) for w in weights)
        if any(f < 0 for f in fractions):
            raise ValueError("profile fractions must be nonnegative")
        total = sum(fractions)
        if rest:
            if total > 1.0 + 1e-9:
                raise ValueError(f"profile fractions sum to {total} > 1 with rest=")
        elif abs(total - 1.0) > 1e-6:
            raise ValueError(f"profile fractions must sum to 1, got {total}")
        return DistributionSpec(kind="profile", fractions=fractions, rest_colors=rest)

    raise ValueError(f"unknown distribution kind {head!r}")


def _rounded_counts(fractions: Iterable[float], n: int) -> list[int]:
    # Largest-remainder rounding so the counts sum to exactly n.
    exact = [f * n for f in fractions]
    counts = [int(e) for e in exact]
    shortfall = n - sum(counts)
    order = sorted(range(len(exact)), key=lambda i: exact[i] - counts[i], reverse=True)
    for i in order[:shortfall]:
        counts[i] += 1
    return counts


def generate(spec: DistributionSpec | str, n: int, rng: RandomStream) -> Instance:
    """Draw an instance of size n from a distribution spec.

    Color ids are arbitrary labels; algorithms only ever see equality.
    Profile instances are shuffled so ball position carries no signal.
    """
    if isinstance(spec, str):
        spec = parse_distribution(spec)
    if n < 0:
        raise ValueError("n must be nonnegative")

    if spec.kind == "distinct":
        return Instance(tuple(range(1, n + 1)))

    if spec.kind == "binary":
        if n >= _BULK_THRESHOLD:
            draws = rng.numpy_child().random(n)
            return Instance(tuple(np.where(draws < spec.p, 1, 2).tolist()))
        colors = tuple(1 if rng.bernoulli(spec.p) else 2 for _ in range(n))
        return Instance(colors)

    if spec.kind == "uniform":
        k = spec.k if spec.k is not None else max(n, 1)
        if n >= _BULK_THRESHOLD:
            draws = rng.numpy_child().integers(1, k + 1, size=n)
            return Instance(tuple(draws.tolist()))
        colors = tuple(rng.randrange(k) + 1 for _ in range(n))
        return Instance(colors)

    if spec.kind == "profile":
        if spec.counts:
            counts = list(spec.counts)
            if sum(counts) != n:
                raise ValueError(f"profile counts sum to {sum(counts)}, expected n={n}")
        else:
            fractions = list(spec.fractions)
            if spec.rest_colors:
                remainder = max(0.0, 1.0 - sum(fractions))
                fractions += [remainder / spec.rest_colors] * spec.rest_colors
            counts = _rounded_counts(fractions, n)
        colors: list[int] = []
        for color, count in enumerate(counts, start=1):
            colors.extend([color] * count)
        if n >= _BULK_THRESHOLD:
            arr = np.fromiter(colors, dtype=np.int64, count=n)
            order = rng.numpy_child().permutation(n)
            return Instance(tuple(arr[order].tolist()))
        rng.shuffle(colors)
        return Instance(tuple(colors))

    raise ValueError(f"unknown distribution kind {spec.kind!r}")


def relabel(instance: Instance, rng: RandomStream) -> Instance:
    """Randomly permute color ids. Answers must be invariant under this."""
    ids = sorted(set(instance.colors))
    shuffled = list(ids)
    rng.shuffle(shuffled)
    mapping = dict(zip(ids, shuffled))
    return Instance(tuple(mapping[c] for c in instance.colors))


# ----------------------------------------------------------------------
# Instance files: line 1 holds n, then one color id per line.
# ----------------------------------------------------------------------


def write_instance(instance: Instance, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"{instance.n}\n")
        for color in instance.colors:
            fh.write(f"{color}\n")


def read_instance(path: str) -> Instance:
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty instance file")
    n = int(lines[0])
    colors = [int(tok) for tok in lines[1:]]
    if len(colors) != n:
        raise ValueError(f"{path}: header says n={n} but found {len(colors)} colors")
    if any(c < 0 for c in colors):
        raise ValueError(f"{path}: color ids must be unsigned")
    return Instance(tuple(colors))
