"""Randomized exact majority finding with certified answers.

The driver draws a small sample, estimates the top two class frequencies,
and dispatches to one of three strategies:

* ``balanced``  - pair balls at random, keep one survivor of each equal
  pair, recurse on the survivors, then settle the verdict with a scan.
* ``heavy``     - census one promising candidate directly, and when it
  falls short, finish the no-majority certificate by pairing off the rest.
* ``light``     - like balanced, but the survivor count is small enough
  that the scan can stop early once the candidate is mathematically dead.

Every path is Las Vegas: answers are always exact, randomness moves only
the comparison count.  No-majority answers carry a certificate that an
independent checker can validate against the comparison transcript alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .answers import Answer, Certificate
from .boyer_moore import boyer_moore
from .certify import lift_certificate
from .core import CountingOracle
from .rng import RandomStream

__all__ = [
    "Params",
    "SampleEstimate",
    "RunStats",
    "LevelStats",
    "estimate_frequencies",
    "classify_branch",
    "majority",
    "balanced",
    "heavy",
    "light",
    "BETA_LOW",
    "BETA_HIGH",
]

# Admissible range for the heavy-branch threshold.  The low end is
# 1 - 1/sqrt(3); the high end is the root of p^3 - 19 p^2 - 8 p + 8 in
# (0, 1).  lowerbound.beta_interval recomputes both from scratch; the
# pinned values here avoid a module cycle and are cross-checked in tests.
BETA_LOW = 1.0 - 3.0 ** -0.5
BETA_HIGH = 0.47579949323375736


def _default_epsilon(m: int) -> float:
    return m ** -0.1


@dataclass(frozen=True)
class Params:
    """Tuning knobs for the randomized driver.

    alpha    - sample-size exponent; the driver samples ceil(m**alpha) balls.
    beta     - heavy-branch threshold; must lie in (BETA_LOW, BETA_HIGH).
    cutoff   - below this size the driver hands off to boyer_moore.
    epsilon  - slack function of the current size m used by the guards.
    cap_factor - hard comparison cap, cap_factor * n per run.
    """

    alpha: float = 1.0 / 3.0
    beta: float = 0.45
    cutoff: int = 1024
    epsilon: Callable[[int], float] = _default_epsilon
    cap_factor: int = 8

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not BETA_LOW < self.beta < BETA_HIGH:
            raise ValueError(
                f"beta must be in ({BETA_LOW:.6f}, {BETA_HIGH:.6f}), got {self.beta}"
            )
        if self.cutoff < 2:
            raise ValueError(f"cutoff must be at least 2, got {self.cutoff}")
        if self.cap_factor < 1:
            raise ValueError("cap_factor must be positive")

    def sample_size(self, m: int) -> int:
        # The tiny nudge stops float noise from bumping an exact power
        # (e.g. m = 10**6 with alpha = 1/3) up to the next integer.
        return min(m, math.ceil(m ** self.alpha - 1e-9))


@dataclass(frozen=True)
class SampleEstimate:
    """Frequency estimate from a without-replacement sample.

    Classes are ordered by decreasing sample frequency, ties broken by
    first appearance; ``representatives[i]`` is the first sampled ball of
    the i-th class.
    """

    representatives: tuple[int, ...]
    frequencies: tuple[float, ...]
    sample_size: int
    comparisons: int

    @property
    def q1(self) -> float:
        return self.frequencies[0] if self.frequencies else 0.0

    @property
    def q2(self) -> float:
        return self.frequencies[1] if len(self.frequencies) > 1 else 0.0


@dataclass
class LevelStats:
    """Per-recursion-level accounting.

    The comparison fields are branch specific: ``pairing`` is the random
    pairing pass (for heavy, its pair scan of the census leftovers),
    ``scan`` is the candidate-versus-others pass (for heavy, the census),
    ``leftover`` covers odd-size resolution probes, ``fallback`` the
    terminal boyer_moore rerun.
    """

    branch: str
    m: int
    sample_comparisons: int = 0
    pairing_comparisons: int = 0
    scan_comparisons: int = 0
    leftover_comparisons: int = 0
    fallback_comparisons: int = 0
    x_size: int = 0
    y_pairs: int = 0

    @property
    def total_comparisons(self) -> int:
        return (
            self.sample_comparisons
            + self.pairing_comparisons
            + self.scan_comparisons
            + self.leftover_comparisons
            + self.fallback_comparisons
        )


@dataclass(frozen=True)
class RunStats:
    comparisons: int
    depth: int
    branch_trace: tuple[str, ...]
    levels: tuple[LevelStats, ...]


def estimate_frequencies(oracle: CountingOracle, sample: Sequence[int]) -> SampleEstimate:
    """Classify the sample against first-seen representatives.

    Each ball is compared against the representatives found so far until it
    matches one or founds its own class, so the cost is at most
    len(sample) * (number of distinct classes) comparisons.
    """
    start = oracle.comparisons
    reps: list[int] = []
    sizes: list[int] = []
    for b in sample:
        for i, r in enumerate(reps):
            if oracle.cmp(b, r):
                sizes[i] += 1
                break
        else:
            reps.append(b)
            sizes.append(1)
    total = len(sample)
    order = sorted(range(len(reps)), key=lambda i: -sizes[i])
    return SampleEstimate(
        representatives=tuple(reps[i] for i in order),
        frequencies=tuple(sizes[i] / total for i in order),
        sample_size=total,
        comparisons=oracle.comparisons - start,
    )


def classify_branch(estimate: SampleEstimate, m: int, params: Params) -> str:
    """Pick the strategy for a sub-instance of size m from a sample estimate."""
    eps = params.epsilon(m)
    q1, q2 = estimate.q1, estimate.q2
    if abs(q1 - 0.5) <= 4 * eps and abs(q2 - 0.5) <= 4 * eps:
        return "balanced"
    tail = sum(q * q for q in estimate.frequencies[1:])
    if q1 >= params.beta and q1 * q1 >= tail + 2 * eps:
        return "heavy"
    return "light"


class _Run:
    """Mutable state threaded through one driver invocation."""

    __slots__ = ("oracle", "params", "rng", "levels", "trace", "_np_gen")

    def __init__(self, oracle: CountingOracle, params: Params, rng: RandomStream):
        self.oracle = oracle
        self.params = params
        self.rng = rng
        self.levels: list[LevelStats] = []
        self.trace: list[str] = []
        self._np_gen = None

    def permuted(self, balls: list[int]) -> list[int]:
        """Uniform permutation; vectorized because runs shuffle millions.

        The generator is seeded once per run by consuming scalar draws, so
        determinism and run-to-run independence both come from the stream.
        """
        if len(balls) < 64:
            order = list(balls)
            self.rng.shuffle(order)
            return order
        if self._np_gen is None:
            self._np_gen = self.rng.numpy_child()
        arr = np.fromiter(balls, dtype=np.int64, count=len(balls))
        return arr[self._np_gen.permutation(len(balls))].tolist()


def _pair_up(run: _Run, balls: list[int]):
    """Shuffle and compare disjoint pairs; exactly len(balls)//2 comparisons.

    Returns (survivors, partner, unequal_pairs, leftover).  The second ball
    of each equal pair survives; ``partner`` maps it back to the first, which
    is what certificate lifting needs to undouble the survivor set.
    """
    order = run.permuted(balls)
    survivors: list[int] = []
    partner: dict[int, int] = {}
    unequal: list[tuple[int, int]] = []
    for i in range(0, len(order) - 1, 2):
        a, b = order[i], order[i + 1]
        if run.oracle.cmp(a, b):
            survivors.append(b)
            partner[b] = a
        else:
            unequal.append((a, b))
    leftover = order[-1] if len(order) % 2 else None
    return survivors, partner, unequal, leftover


def _resolve_leftover(
    run: _Run,
    lv: LevelStats,
    balls: list[int],
    leftover: int,
    cert: Certificate,
    m: int,
) -> tuple[Answer, Certificate | None]:
    """Settle an odd instance whose even part certified no-majority.

    The even part caps every class at (m-1)/2, so the only class that can
    still reach a majority is the leftover's own.  The leftover probes the
    certificate's pairs (a double miss yields a rainbow triangle) and then
    its uncovered balls, tracking an upper bound on the class: one slot per
    unprobed pair or ball.  Probing stops the moment the bound clears m//2,
    which with a fully covering certificate is the first double miss; if
    the class instead crosses m//2, a full census turns the level into a
    majority answer after all.
    """
    if cert.triangle is not None:
        raise ValueError("leftover resolution expects a triangle-free certificate")
    oracle = run.oracle
    start = oracle.comparisons
    half = m // 2
    klass = {leftover}
    excluded: set[int] = set()
    covered = set(cert.covered_balls())
    uncovered = [
        b for b in balls if b != leftover and b != cert.candidate and b not in covered
    ]
    potential = 1 + len(cert.pairs) + len(uncovered)
    if cert.candidate is not None:
        # Resolving leftover-versus-candidate up front keeps the candidate's
        # uncovered budget tight if the certificate is reused below.
        potential += 1
        if oracle.cmp(leftover, cert.candidate):
            klass.add(cert.candidate)
        else:
            excluded.add(cert.candidate)
            potential -= 1

    pairs = cert.pairs
    triangle: tuple[int, int, int] | None = None
    kept: list[tuple[int, int]] = []
    i = 0
    while i < len(pairs) and len(klass) <= half and potential > half:
        a, b = pairs[i]
        i += 1
        if oracle.cmp(leftover, a):
            klass.add(a)
            excluded.add(b)
            kept.append((a, b))
        elif oracle.cmp(leftover, b):
            klass.add(b)
            excluded.add(a)
            kept.append((a, b))
        else:
            excluded.update((a, b))
            potential -= 1
            if triangle is None:
                triangle = (leftover, a, b)
            else:
                kept.append((a, b))

    # Without a triangle the leftover stays uncovered, and only the full
    # probe sweep plus the anchor arithmetic below yields a checkable
    # certificate, so the potential exit applies to triangle exits alone.
    j = 0
    while (
        j < len(uncovered)
        and len(klass) <= half
        and (triangle is None or potential > half)
    ):
        b = uncovered[j]
        j += 1
        if oracle.cmp(leftover, b):
            klass.add(b)
        else:
            excluded.add(b)
            potential -= 1
    lv.leftover_comparisons += oracle.comparisons - start

    if len(klass) > half:
        # The leftover's class is the level majority; finish the census so
        # the claimed multiplicity is exact.
        start = oracle.comparisons
        for a, b in pairs[i:]:
            if oracle.cmp(leftover, a):
                klass.add(a)
            elif oracle.cmp(leftover, b):
                klass.add(b)
        for b in uncovered[j:]:
            if oracle.cmp(leftover, b):
                klass.add(b)
        lv.leftover_comparisons += oracle.comparisons - start
        return Answer.majority(leftover, len(klass)), None

    if triangle is not None:
        return Answer.no_majority(), Certificate(
            pairs=tuple(kept) + pairs[i:], triangle=triangle, candidate=cert.candidate
        )

    # Every pair absorbed a probe, so a certificate anchored at the leftover
    # is valid whenever its uncovered budget holds; otherwise the inherited
    # candidate's certificate is (provably) the one with slack.
    sigma = sum(1 for b in excluded if b not in covered)
    if len(cert.pairs) + sigma <= m // 2:
        anchor = leftover
    else:
        assert cert.candidate is not None
        anchor = cert.candidate
    return Answer.no_majority(), Certificate(pairs=cert.pairs, candidate=anchor)


def _finish_no_majority(
    run: _Run,
    lv: LevelStats,
    balls: list[int],
    sub_cert: Certificate,
    partner: dict[int, int],
    unequal: list[tuple[int, int]],
    leftover: int | None,
    m: int,
) -> tuple[Answer, Certificate | None]:
    """Lift a survivor-level certificate back to the full level."""
    lifted = lift_certificate(sub_cert, partner)
    if lifted.triangle is not None:
        raise ValueError("survivor certificates must lift without triangles")
    cert = Certificate(pairs=tuple(unequal) + lifted.pairs, candidate=lifted.candidate)
    if leftover is None:
        return Answer.no_majority(), cert
    return _resolve_leftover(run, lv, balls, leftover, cert, m)


def _balanced(
    run: _Run, balls: list[int], sample_cost: int
) -> tuple[Answer, Certificate | None]:
    m = len(balls)
    lv = LevelStats("balanced", m, sample_comparisons=sample_cost)
    run.levels.append(lv)
    run.trace.append("balanced")
    oracle = run.oracle

    start = oracle.comparisons
    survivors, partner, unequal, leftover = _pair_up(run, balls)
    lv.pairing_comparisons = oracle.comparisons - start
    lv.x_size = len(survivors)
    lv.y_pairs = len(unequal)

    if survivors:
        sub_answer, sub_cert = _solve(run, survivors)
    else:
        sub_answer, sub_cert = Answer.no_majority(), Certificate()

    if not sub_answer.is_majority:
        assert sub_cert is not None
        return _finish_no_majority(run, lv, balls, sub_cert, partner, unequal, leftover, m)

    v = sub_answer.witness
    cnt = 2 * sub_answer.multiplicity
    start = oracle.comparisons
    for a, b in unequal:
        if oracle.cmp(v, a):
            cnt += 1
        elif oracle.cmp(v, b):
            cnt += 1
    lv.scan_comparisons = oracle.comparisons - start
    if leftover is not None:
        start = oracle.comparisons
        if oracle.cmp(v, leftover):
            cnt += 1
        lv.leftover_comparisons = oracle.comparisons - start

    if cnt > m // 2:
        return Answer.majority(v, cnt), None
    return Answer.no_majority(), Certificate(pairs=tuple(unequal), candidate=v)


def _light(
    run: _Run, balls: list[int], sample_cost: int
) -> tuple[Answer, Certificate | None]:
    m = len(balls)
    lv = LevelStats("light", m, sample_comparisons=sample_cost)
    run.levels.append(lv)
    run.trace.append("light")
    oracle = run.oracle

    start = oracle.comparisons
    survivors, partner, unequal, leftover = _pair_up(run, balls)
    lv.pairing_comparisons = oracle.comparisons - start
    lv.x_size = len(survivors)
    lv.y_pairs = len(unequal)

    if survivors:
        sub_answer, sub_cert = _solve(run, survivors)
    else:
        sub_answer, sub_cert = Answer.no_majority(), Certificate()

    if not sub_answer.is_majority:
        assert sub_cert is not None
        return _finish_no_majority(run, lv, balls, sub_cert, partner, unequal, leftover, m)

    # The survivor majority can only reach m//2 overall if nearly every
    # unequal pair hides one more of its class, so track the deficit and
    # stop as soon as it hits zero: no-majority is then already forced.
    v = sub_answer.witness
    cnt = 2 * sub_answer.multiplicity - len(survivors)
    assert cnt >= 1
    if leftover is not None:
        start = oracle.comparisons
        if oracle.cmp(v, leftover):
            cnt += 1
        lv.leftover_comparisons = oracle.comparisons - start

    start = oracle.comparisons
    for a, b in unequal:
        if not oracle.cmp(v, a):
            if not oracle.cmp(v, b):
                cnt -= 1
                if cnt == 0:
                    lv.scan_comparisons = oracle.comparisons - start
                    return Answer.no_majority(), Certificate(
                        pairs=tuple(unequal), candidate=v
                    )
    lv.scan_comparisons = oracle.comparisons - start
    return Answer.majority(v, m // 2 + cnt), None


def _heavy(
    run: _Run, balls: list[int], candidate: int, sample_cost: int
) -> tuple[Answer, Certificate | None]:
    m = len(balls)
    lv = LevelStats("heavy", m, sample_comparisons=sample_cost)
    run.levels.append(lv)
    run.trace.append("heavy")
    oracle = run.oracle
    if candidate not in set(balls):
        raise ValueError("heavy candidate must be one of the balls")

    start = oracle.comparisons
    cnt = 1
    mates: list[int] = []  # candidate's class, censused directly
    others: list[int] = []
    for b in balls:
        if b == candidate:
            continue
        if oracle.cmp(candidate, b):
            cnt += 1
            mates.append(b)
        else:
            others.append(b)
    lv.scan_comparisons = oracle.comparisons - start

    if cnt > m // 2:
        return Answer.majority(candidate, cnt), None

    # The census leaves cnt class balls and m - cnt others; every other ball
    # already conflicts with the candidate's class, so each unequal pair
    # found among the others frees two cover slots.  Needing zero pairs
    # (even m, census exactly half) closes immediately with cross pairs.
    need = m // 2 - cnt + (1 if m % 2 else 0)
    klass = [candidate] + mates
    if need == 0:
        pairs = tuple(zip(others, klass))
        assert len(pairs) == m // 2
        return Answer.no_majority(), Certificate(pairs=pairs)

    order = run.permuted(others)
    found: list[tuple[int, int]] = []
    start = oracle.comparisons
    for i in range(0, len(order) - 1, 2):
        a, b = order[i], order[i + 1]
        if not oracle.cmp(a, b):
            found.append((a, b))
            if len(found) == need:
                break
    lv.pairing_comparisons = oracle.comparisons - start

    if len(found) < need:
        # Unlucky pair scan; rerun the deterministic baseline on the whole
        # level.  Rare by construction and still within the comparison cap.
        start = oracle.comparisons
        answer, cert = boyer_moore(oracle, balls)
        lv.fallback_comparisons = oracle.comparisons - start
        run.trace.append("fallback")
        return answer, cert

    in_pair = {b for pair in found for b in pair}
    rest = [b for b in others if b not in in_pair]
    triangle = None
    if m % 2:
        a, b = found.pop()
        triangle = (a, b, klass.pop())
    assert len(rest) == len(klass)
    pairs = tuple(found) + tuple(zip(rest, klass))
    return Answer.no_majority(), Certificate(pairs=pairs, triangle=triangle)


def _sample(run: _Run, balls: list[int]) -> SampleEstimate:
    size = run.params.sample_size(len(balls))
    positions = run.rng.sample_indices(len(balls), size)
    return estimate_frequencies(run.oracle, [balls[p - 1] for p in positions])


def _base(run: _Run, balls: list[int]) -> tuple[Answer, Certificate | None]:
    lv = LevelStats("base", len(balls))
    run.levels.append(lv)
    run.trace.append("base")
    start = run.oracle.comparisons
    answer, cert = boyer_moore(run.oracle, balls)
    lv.scan_comparisons = run.oracle.comparisons - start
    return answer, cert


def _solve(run: _Run, balls: list[int]) -> tuple[Answer, Certificate | None]:
    m = len(balls)
    if m == 1:
        lv = LevelStats("base", 1)
        run.levels.append(lv)
        run.trace.append("base")
        return Answer.majority(balls[0], 1), None
    if m <= run.params.cutoff:
        return _base(run, balls)
    est = _sample(run, balls)
    branch = classify_branch(est, m, run.params)
    if branch == "balanced":
        return _balanced(run, balls, est.comparisons)
    if branch == "heavy":
        return _heavy(run, balls, est.representatives[0], est.comparisons)
    return _light(run, balls, est.comparisons)


def _finish(
    run: _Run, start: int, m: int, result: tuple[Answer, Certificate | None]
) -> tuple[Answer, Certificate | None, RunStats]:
    used = run.oracle.comparisons - start
    cap = run.params.cap_factor * max(1, m)
    assert used <= cap, f"comparison cap breached: {used} > {cap}"
    if m >= 1:
        assert len(run.levels) <= math.log2(max(2, m)) + 1, "recursion too deep"
    stats = RunStats(
        comparisons=used,
        depth=len(run.levels),
        branch_trace=tuple(run.trace),
        levels=tuple(run.levels),
    )
    answer, cert = result
    return answer, cert, stats


def _prepare(
    oracle: CountingOracle,
    balls: Sequence[int] | None,
    params: Params | None,
    rng: RandomStream | None,
) -> tuple[_Run, list[int]]:
    if balls is None:
        balls = range(1, oracle.instance.n + 1)
    if params is None:
        params = Params()
    if rng is None:
        rng = RandomStream(0, "majority")
    return _Run(oracle, params, rng), list(balls)


def majority(
    oracle: CountingOracle,
    balls: Sequence[int] | None = None,
    params: Params | None = None,
    rng: RandomStream | None = None,
) -> tuple[Answer, Certificate | None, RunStats]:
    """Exact majority of the given balls; Las Vegas comparison count.

    Returns (answer, certificate, stats).  The certificate accompanies
    no-majority answers; majority answers are checkable from the transcript
    alone.  Total comparisons are capped at params.cap_factor * len(balls).
    """
    run, balls = _prepare(oracle, balls, params, rng)
    if not balls:
        return Answer.no_majority(), Certificate(), RunStats(0, 0, (), ())
    start = run.oracle.comparisons
    return _finish(run, start, len(balls), _solve(run, balls))


def balanced(
    oracle: CountingOracle,
    balls: Sequence[int] | None = None,
    params: Params | None = None,
    rng: RandomStream | None = None,
) -> tuple[Answer, Certificate | None, RunStats]:
    """Run the pairing strategy unconditionally at the top level."""
    run, balls = _prepare(oracle, balls, params, rng)
    if not balls:
        return Answer.no_majority(), Certificate(), RunStats(0, 0, (), ())
    start = run.oracle.comparisons
    return _finish(run, start, len(balls), _balanced(run, balls, 0))


def light(
    oracle: CountingOracle,
    balls: Sequence[int] | None = None,
    params: Params | None = None,
    rng: RandomStream | None = None,
) -> tuple[Answer, Certificate | None, RunStats]:
    """Run the early-exit pairing strategy unconditionally at the top level."""
    run, balls = _prepare(oracle, balls, params, rng)
    if not balls:
        return Answer.no_majority(), Certificate(), RunStats(0, 0, (), ())
    start = run.oracle.comparisons
    return _finish(run, start, len(balls), _light(run, balls, 0))


def heavy(
    oracle: CountingOracle,
    candidate: int,
    balls: Sequence[int] | None = None,
    params: Params | None = None,
    rng: RandomStream | None = None,
) -> tuple[Answer, Certificate | None, RunStats]:
    """Census the given candidate unconditionally at the top level."""
    run, balls = _prepare(oracle, balls, params, rng)
    if not balls:
        return Answer.no_majority(), Certificate(), RunStats(0, 0, (), ())
    start = run.oracle.comparisons
    return _finish(run, start, len(balls), _heavy(run, balls, candidate, 0))
