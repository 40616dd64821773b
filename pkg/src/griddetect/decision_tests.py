"""Most-powerful and Bayes decision rules for the base station.

Both rules reduce to comparing the weighted alarm score against a
threshold, rejecting the event hypothesis when the score is small (few
alarms point at a normal cell). The most-powerful rule calibrates an
exact size by randomizing on the boundary atom; the Bayes rule derives
its threshold from the prior and the loss ratio and never randomizes.

Hypothesis convention: H0 = event occurred, H1 = normal. Rejecting H0
declares the cell normal, so the type I error (missing a real event) is
the rejection probability under the event.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Protocol

from .model import DomainError, LossRatio, Prior, ValidatedScenario
from .score_dist import (
    ClassAlarmLaw,
    ScoreDistribution,
    atom_tolerance,
    score_distribution,
)

__all__ = [
    "Verdict",
    "Decision",
    "Observation",
    "MPTest",
    "BayesTest",
    "OperatingCharacteristics",
    "UniformSource",
    "solve_mp_test",
    "mp_decide",
    "bayes_test",
    "bayes_decide",
    "operating_characteristics",
    "np_optimality_check",
    "NP_CHECK_MAX_SENSORS",
]

NP_CHECK_MAX_SENSORS = 20


class UniformSource(Protocol):
    """Anything with random() -> float in [0, 1); random.Random and numpy Generators qualify."""

    def random(self) -> float: ...


class Verdict(Enum):
    ACCEPT_H0 = "declare-event"
    REJECT_H0 = "declare-normal"


@dataclass(frozen=True)
class Decision:
    """Outcome of applying a rule to one observation.

    ``randomized`` is True only when a boundary coin was actually drawn.
    """

    verdict: Verdict
    randomized: bool = False

    @property
    def declared_event(self) -> bool:
        return self.verdict is Verdict.ACCEPT_H0


@dataclass(frozen=True)
class Observation:
    """Per-class alarm counts reported to the base station."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(self.counts))
        for i, x in enumerate(self.counts):
            if int(x) != x or x < 0:
                raise DomainError(f"class {i}: alarm count must be a non-negative integer, got {x}")


def _check_observation(obs: Observation, class_counts: tuple[int, ...]) -> None:
    if len(obs.counts) != len(class_counts):
        raise DomainError(
            f"observation has {len(obs.counts)} classes, rule expects {len(class_counts)}"
        )
    for i, (x, n) in enumerate(zip(obs.counts, class_counts)):
        if x > n:
            raise DomainError(f"class {i}: alarm count {x} exceeds class size {n}")


@dataclass(frozen=True)
class MPTest:
    """A solved most-powerful test of a given size.

    Reject H0 when the score is below ``threshold``; on the boundary atom
    reject with probability ``boundary_prob``. ``exact_size`` is the
    rejection probability under the law the test was solved against and
    ``exact_power`` the rejection probability under the normal hypothesis.
    In the degenerate p_w = 0 regime (``degenerate`` set) the rule ignores
    weights entirely and rejects, with probability ``boundary_prob``, only
    when every sensor stayed silent.
    """

    weights: tuple[float, ...]
    class_counts: tuple[int, ...]
    threshold: float
    boundary_prob: float
    requested_size: float
    exact_size: float
    exact_power: float
    degenerate: bool = False


@dataclass(frozen=True)
class BayesTest:
    """The minimum-risk rule for a prior and loss ratio.

    Reject H0 when the score is strictly below ``threshold``. When the
    threshold is not positive the rule accepts H0 for every observation
    and ``applicable`` is False. ``normalized_weights`` rescales the
    weights by the threshold (defined only when applicable), so the rule
    reads: reject when the normalized score is below one.
    """

    weights: tuple[float, ...]
    class_counts: tuple[int, ...]
    threshold: float
    applicable: bool
    normalized_weights: tuple[float, ...] | None
    degenerate: bool = False


class OperatingCharacteristics(NamedTuple):
    type1: float
    power: float


def _event_law(scenario: ValidatedScenario) -> ClassAlarmLaw:
    return ClassAlarmLaw(scenario.topology.counts, scenario.derived().alarm_probs)


def _normal_law(scenario: ValidatedScenario) -> ClassAlarmLaw:
    counts = scenario.topology.counts
    return ClassAlarmLaw(counts, (scenario.channel.p_w,) * len(counts))


def _require_finite_weights(scenario: ValidatedScenario) -> tuple[float, ...]:
    stats = scenario.derived()
    for cls, w in zip(scenario.topology.classes, stats.weights):
        if math.isinf(w):
            raise DomainError(
                f"class {cls.label!r}: alarm is certain under the event "
                "(p_c = 1 with detect_prob = 1 and p_w > 0); no finite score weight exists"
            )
    return stats.weights


def _walk_to_threshold(dist: ScoreDistribution, size: float) -> tuple[float, float, float, float]:
    """Find the unique atom v with P(X < v) <= size < P(X <= v).

    Returns (threshold, boundary_prob, mass_below, mass_at). The boundary
    probability absorbs whatever part of the size the strict region does
    not reach, so mass_below + boundary_prob * mass_at equals the size.
    """
    below = 0.0
    for atom in dist.atoms[:-1]:
        if size < below + atom.prob:
            return atom.value, (size - below) / atom.prob, below, atom.prob
        below += atom.prob
    last = dist.atoms[-1]
    k = min(1.0, max(0.0, (size - below) / last.prob))
    return last.value, k, below, last.prob


def solve_mp_test(
    scenario: ValidatedScenario,
    size: float,
    *,
    weights: Iterable[float] | None = None,
    event_alarm_probs: Iterable[float] | None = None,
) -> MPTest:
    """Construct the most-powerful test of the given size.

    ``weights`` and ``event_alarm_probs`` override the exact
    log-likelihood-ratio weights and event-alarm probabilities, which is
    how the integer-approximated rules from the reference tables are
    reproduced; omitted, the exact values are used and the solved size is
    exact to machine precision.

    With p_w = 0 silence is certain under the normal hypothesis, so the
    likelihood ratio is positive only on the all-silent observation: the
    rule rejects there, deterministically when that point's event
    probability fits inside the size, else with the calibrated coin.
    """
    size = float(size)
    if not (0.0 < size < 1.0):
        raise DomainError(f"test size must lie in (0, 1), got {size}")
    counts = scenario.topology.counts
    stats = scenario.derived()

    if scenario.channel.silent_when_undetected:
        if weights is not None or event_alarm_probs is not None:
            raise DomainError("weight/probability overrides are meaningless when p_w = 0")
        all_silent = math.prod(q**n for q, n in zip(stats.silence_probs, counts))
        if all_silent <= size:
            k, exact_size, exact_power = 1.0, all_silent, 1.0
        else:
            k = size / all_silent
            exact_size, exact_power = size, k
        return MPTest(
            weights=stats.weights,
            class_counts=counts,
            threshold=0.0,
            boundary_prob=k,
            requested_size=size,
            exact_size=exact_size,
            exact_power=exact_power,
            degenerate=True,
        )

    if weights is None:
        w = _require_finite_weights(scenario)
    else:
        w = tuple(float(x) for x in weights)
    q0 = stats.alarm_probs if event_alarm_probs is None else tuple(event_alarm_probs)
    h0 = score_distribution(w, ClassAlarmLaw(counts, q0))
    threshold, k, below, at = _walk_to_threshold(h0, size)
    h1 = score_distribution(w, _normal_law(scenario))
    power = h1.prob_below(threshold) + k * h1.prob_at(threshold)
    return MPTest(
        weights=w,
        class_counts=counts,
        threshold=threshold,
        boundary_prob=k,
        requested_size=size,
        exact_size=below + k * at,
        exact_power=power,
    )


def _boundary_decision(k: float, coin: UniformSource) -> Decision:
    if k >= 1.0:
        return Decision(Verdict.REJECT_H0, randomized=False)
    if k <= 0.0:
        return Decision(Verdict.ACCEPT_H0, randomized=False)
    verdict = Verdict.REJECT_H0 if coin.random() < k else Verdict.ACCEPT_H0
    return Decision(verdict, randomized=True)


def mp_decide(test: MPTest, obs: Observation, coin: UniformSource) -> Decision:
    """Apply a most-powerful rule to one observation.

    ``coin`` supplies the single uniform draw used on the boundary atom;
    the caller owns it, so decisions stay reproducible under seeded use.
    """
    _check_observation(obs, test.class_counts)
    if test.degenerate:
        if all(x == 0 for x in obs.counts):
            return _boundary_decision(test.boundary_prob, coin)
        return Decision(Verdict.ACCEPT_H0)
    if test.threshold == -math.inf:
        return Decision(Verdict.ACCEPT_H0)
    score = math.fsum(w * x for w, x in zip(test.weights, obs.counts))
    if abs(score - test.threshold) <= atom_tolerance(test.threshold):
        return _boundary_decision(test.boundary_prob, coin)
    if score < test.threshold:
        return Decision(Verdict.REJECT_H0)
    return Decision(Verdict.ACCEPT_H0)


def bayes_test(scenario: ValidatedScenario, prior: Prior, loss: LossRatio) -> BayesTest:
    """Construct the Bayes rule for two-point losses.

    The threshold is log(p_n / (l * p_e)) plus one log term per sensor
    comparing silence probabilities under the two hypotheses. A
    non-positive threshold means no observation can favor the normal
    hypothesis strongly enough, and the rule accepts H0 everywhere.

    With p_w = 0 the rule collapses to rejecting on the all-silent
    observation, applicable exactly when the loss ratio is below
    (p_n / p_e) * prod(silence_probs[i] ** -count[i]).
    """
    counts = scenario.topology.counts
    stats = scenario.derived()
    p_e, p_n, l = prior.event_prob, prior.normal_prob, loss.value

    if scenario.channel.silent_when_undetected:
        all_silent = math.prod(q**n for q, n in zip(stats.silence_probs, counts))
        bound = math.inf if all_silent == 0.0 else (p_n / p_e) / all_silent
        return BayesTest(
            weights=stats.weights,
            class_counts=counts,
            threshold=math.nan,
            applicable=l < bound,
            normalized_weights=None,
            degenerate=True,
        )

    w = _require_finite_weights(scenario)
    p_w = scenario.channel.p_w
    threshold = math.log(p_n / (l * p_e)) + math.fsum(
        n * math.log((1.0 - p_w) / q)
        for n, q in zip(counts, stats.silence_probs)
    )
    applicable = threshold > 0.0
    return BayesTest(
        weights=w,
        class_counts=counts,
        threshold=threshold,
        applicable=applicable,
        normalized_weights=tuple(x / threshold for x in w) if applicable else None,
    )


def bayes_decide(test: BayesTest, obs: Observation) -> Decision:
    """Apply a Bayes rule: reject H0 when the score is strictly below the threshold.

    A score within atom tolerance of the threshold counts as equal and is
    accepted; equality has probability zero for generic real weights.
    """
    _check_observation(obs, test.class_counts)
    if not test.applicable:
        return Decision(Verdict.ACCEPT_H0)
    if test.degenerate:
        verdict = Verdict.REJECT_H0 if all(x == 0 for x in obs.counts) else Verdict.ACCEPT_H0
        return Decision(verdict)
    score = math.fsum(w * x for w, x in zip(test.weights, obs.counts))
    if test.threshold - score > atom_tolerance(test.threshold):
        return Decision(Verdict.REJECT_H0)
    return Decision(Verdict.ACCEPT_H0)


def operating_characteristics(
    rule: MPTest | BayesTest, scenario: ValidatedScenario
) -> OperatingCharacteristics:
    """Exact type I error and power of a rule under a scenario's true laws.

    The rule may have been built with approximated weights or even for a
    different channel; both rates are re-derived from the scenario's
    event/normal alarm laws, so a rule solved on approximate
    probabilities reports its true size here.
    """
    counts = scenario.topology.counts
    if rule.class_counts != counts:
        raise DomainError(
            f"rule was built for class counts {rule.class_counts}, scenario has {counts}"
        )
    stats = scenario.derived()
    p_w = scenario.channel.p_w

    if isinstance(rule, BayesTest) and not rule.applicable:
        return OperatingCharacteristics(type1=0.0, power=0.0)

    if rule.degenerate:
        k = rule.boundary_prob if isinstance(rule, MPTest) else 1.0
        silent_h0 = math.prod(q**n for q, n in zip(stats.silence_probs, counts))
        silent_h1 = math.prod((1.0 - p_w) ** n for n in counts)
        return OperatingCharacteristics(type1=k * silent_h0, power=k * silent_h1)

    h0 = score_distribution(rule.weights, _event_law(scenario))
    h1 = score_distribution(rule.weights, _normal_law(scenario))
    if isinstance(rule, MPTest):
        if rule.threshold == -math.inf:
            return OperatingCharacteristics(type1=0.0, power=0.0)
        k = rule.boundary_prob
        type1 = h0.prob_below(rule.threshold) + k * h0.prob_at(rule.threshold)
        power = h1.prob_below(rule.threshold) + k * h1.prob_at(rule.threshold)
    else:
        type1 = h0.prob_below(rule.threshold)
        power = h1.prob_below(rule.threshold)
    return OperatingCharacteristics(type1=type1, power=power)


def _response_vector_masses(
    scenario: ValidatedScenario,
) -> list[tuple[float, float, float]]:
    """Per response vector: (log likelihood ratio of normal vs event, event mass, normal mass)."""
    counts = scenario.topology.counts
    stats = scenario.derived()
    p_w = scenario.channel.p_w
    sensor_q0 = [stats.alarm_probs[i] for i, n in enumerate(counts) for _ in range(n)]
    out = []
    for bits in itertools.product((0, 1), repeat=sum(counts)):
        p0 = 1.0
        p1 = 1.0
        for b, q0 in zip(bits, sensor_q0):
            p0 *= q0 if b else 1.0 - q0
            p1 *= p_w if b else 1.0 - p_w
        if p1 <= 0.0:
            llr = -math.inf
        elif p0 <= 0.0:
            llr = math.inf
        else:
            llr = math.log(p1) - math.log(p0)
        out.append((llr, p0, p1))
    return out


def np_optimality_check(scenario: ValidatedScenario, size: float) -> bool:
    """Verify the solved test against a direct likelihood-ratio construction.

    Sorts every individual response vector by the likelihood ratio of
    normal over event, fills the rejection region greedily to the exact
    size (randomizing the boundary group of tied ratios), and compares
    the resulting power with the solved test's. Independent of the score
    machinery: masses come from per-sensor Bernoulli products.
    """
    if scenario.topology.total_count > NP_CHECK_MAX_SENSORS:
        raise DomainError(
            f"optimality check enumerates response vectors and is capped at "
            f"{NP_CHECK_MAX_SENSORS} sensors, got {scenario.topology.total_count}"
        )
    if not scenario.channel.silent_when_undetected:
        _require_finite_weights(scenario)
    vectors = sorted(_response_vector_masses(scenario), key=lambda v: -v[0])

    # group ties in the ratio; tolerance mirrors score-atom merging
    groups: list[tuple[float, float]] = []
    head = None
    g0 = g1 = 0.0
    for llr, p0, p1 in vectors:
        same = head is not None and (
            (head == llr)
            or (math.isfinite(head) and math.isfinite(llr) and head - llr <= atom_tolerance(head))
        )
        if same:
            g0 += p0
            g1 += p1
        else:
            if head is not None:
                groups.append((g0, g1))
            head, g0, g1 = llr, p0, p1
    groups.append((g0, g1))

    used = 0.0
    power = 0.0
    for g0, g1 in groups:
        if used + g0 <= size:
            used += g0
            power += g1
        else:
            power += (size - used) / g0 * g1
            break

    solved = solve_mp_test(scenario, size)
    return abs(power - solved.exact_power) <= 1e-10
