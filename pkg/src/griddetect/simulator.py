"""Seeded Monte Carlo generator for whole detection trials.

Every trial draws its randomness from an independent stream keyed by
(master_seed, trial_index) through numpy's SeedSequence, so trial i's
outcome never depends on how many trials ran before it or in what order.
Aggregation uses integer counts only, which makes a full report
bit-reproducible for a given (scenario, prior, tests, n_trials, seed).

Draw-order contract within one trial (fixed; changing it changes results):

1. one uniform for the truth (event iff u < p_e);
2. for each class in topology order, for each sensor of the class:
   one uniform for detection (skipped when the truth is normal, where
   detection is impossible), then one uniform for the response;
3. for each evaluated test, in order: at most one uniform for the
   boundary coin of a randomized decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .decision_tests import BayesTest, Decision, MPTest, Observation, bayes_decide, mp_decide
from .model import DomainError, Prior, ValidatedScenario

__all__ = [
    "GENERATOR_NAME",
    "Truth",
    "TrialOutcome",
    "ClassSimStats",
    "TestSimStats",
    "SimReport",
    "derive_trial_seed",
    "trial_rng",
    "draw_world",
    "simulate_trial",
    "run_trials",
]

# Pinned RNG wiring; reports carry it so reported numbers stay re-derivable.
# Trial i draws from Generator(PCG64(SeedSequence((master_seed, i)))).
GENERATOR_NAME = "pcg64/per-trial-seedseq"

TestSpec = tuple[str, MPTest | BayesTest]


class Truth(Enum):
    EVENT = "event"
    NORMAL = "normal"


@dataclass(frozen=True)
class TrialOutcome:
    """One simulated world: truth, per-sensor bits, and the decisions taken."""

    truth: Truth
    detections: tuple[tuple[int, ...], ...]
    responses: tuple[tuple[int, ...], ...]
    decisions: tuple[Decision, ...]

    def __post_init__(self) -> None:
        if self.truth is Truth.NORMAL and any(y for cls in self.detections for y in cls):
            raise DomainError("detections are impossible in a normal trial")

    @property
    def alarm_counts(self) -> tuple[int, ...]:
        return tuple(sum(cls) for cls in self.responses)


def _check_master_seed(master_seed: int) -> int:
    if int(master_seed) != master_seed or not 0 <= master_seed < 2**64:
        raise DomainError(f"master seed must be a 64-bit unsigned integer, got {master_seed}")
    return int(master_seed)


def derive_trial_seed(master_seed: int, index: int) -> np.random.SeedSequence:
    """Counter-style per-trial seed: a pure function of (master_seed, index)."""
    _check_master_seed(master_seed)
    if index < 0:
        raise DomainError(f"trial index must be non-negative, got {index}")
    return np.random.SeedSequence(entropy=(int(master_seed), int(index)))


def trial_rng(trial_seed: int | np.random.SeedSequence) -> np.random.Generator:
    """The pinned generator for one trial stream (PCG64 over the seed)."""
    if not isinstance(trial_seed, np.random.SeedSequence):
        trial_seed = np.random.SeedSequence(int(trial_seed))
    return np.random.Generator(np.random.PCG64(trial_seed))


def draw_world(
    scenario: ValidatedScenario, truth: Truth, rng: np.random.Generator
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Draw detection and response bits for every sensor given the truth.

    Follows steps 2 of the module draw-order contract; exposed so
    controlled-condition experiments (calibration logs) can force the
    truth instead of drawing it.
    """
    p_c = scenario.channel.p_c
    p_w = scenario.channel.p_w
    event = truth is Truth.EVENT
    detections: list[tuple[int, ...]] = []
    responses: list[tuple[int, ...]] = []
    for cls in scenario.topology.classes:
        ys = []
        xs = []
        for _ in range(cls.count):
            y = 1 if (event and rng.random() < cls.detect_prob) else 0
            x = 1 if rng.random() < (p_c if y else p_w) else 0
            ys.append(y)
            xs.append(x)
        detections.append(tuple(ys))
        responses.append(tuple(xs))
    return tuple(detections), tuple(responses)


def simulate_trial(
    scenario: ValidatedScenario,
    prior: Prior,
    trial_seed: int | np.random.SeedSequence,
    tests: Sequence[TestSpec] = (),
) -> TrialOutcome:
    """Simulate one trial and evaluate every supplied (name, test) pair on it."""
    rng = trial_rng(trial_seed)
    truth = Truth.EVENT if rng.random() < prior.event_prob else Truth.NORMAL
    detections, responses = draw_world(scenario, truth, rng)
    obs = Observation(tuple(sum(xs) for xs in responses))
    decisions = tuple(
        mp_decide(test, obs, rng) if isinstance(test, MPTest) else bayes_decide(test, obs)
        for _, test in tests
    )
    return TrialOutcome(truth=truth, detections=detections, responses=responses, decisions=decisions)


@dataclass(frozen=True)
class ClassSimStats:
    """Empirical per-class error rates with their denominators.

    ``silence_rate_event`` pools every sensor of the class over event
    trials. The two posterior rates are estimated from the class's first
    sensor only, one record per trial, so each is a plain binomial
    proportion and the usual standard error applies; pooling sensors
    within a trial would correlate records through the shared truth.
    """

    label: str
    count: int
    n_event_silent: int
    n_event_records: int
    n_first_silent_event: int
    n_first_silent: int
    n_first_alarm_normal: int
    n_first_alarm: int

    @property
    def silence_rate_event(self) -> float:
        return _rate(self.n_event_silent, self.n_event_records)

    @property
    def event_given_silent(self) -> float:
        return _rate(self.n_first_silent_event, self.n_first_silent)

    @property
    def normal_given_alarm(self) -> float:
        return _rate(self.n_first_alarm_normal, self.n_first_alarm)


@dataclass(frozen=True)
class TestSimStats:
    """Empirical conditional decision rates for one evaluated test."""

    name: str
    n_accept_event: int
    n_event: int
    n_reject_normal: int
    n_normal: int

    @property
    def accept_given_event(self) -> float:
        return _rate(self.n_accept_event, self.n_event)

    @property
    def reject_given_normal(self) -> float:
        return _rate(self.n_reject_normal, self.n_normal)


def _rate(num: int, denom: int) -> float:
    return num / denom if denom else math.nan


@dataclass(frozen=True)
class SimReport:
    """Aggregated empirical rates for a full run, with full provenance."""

    n_trials: int
    master_seed: int
    generator: str
    n_event: int
    n_normal: int
    class_stats: tuple[ClassSimStats, ...]
    test_stats: tuple[TestSimStats, ...]


def run_trials(
    scenario: ValidatedScenario,
    prior: Prior,
    tests: Sequence[TestSpec],
    n_trials: int,
    master_seed: int,
) -> SimReport:
    """Run seeded trials and aggregate empirical error and decision rates.

    Trial i uses the stream from derive_trial_seed(master_seed, i), so a
    report is a pure function of its arguments and single trials can be
    replayed in isolation.
    """
    if int(n_trials) != n_trials or n_trials < 1:
        raise DomainError(f"n_trials must be a positive integer, got {n_trials}")
    master_seed = _check_master_seed(master_seed)
    classes = scenario.topology.classes
    k = len(classes)

    n_event = 0
    ev_silent = [0] * k
    first_silent = [0] * k
    first_silent_event = [0] * k
    first_alarm = [0] * k
    first_alarm_normal = [0] * k
    accept_event = [0] * len(tests)
    reject_normal = [0] * len(tests)

    for i in range(n_trials):
        outcome = simulate_trial(scenario, prior, derive_trial_seed(master_seed, i), tests)
        event = outcome.truth is Truth.EVENT
        if event:
            n_event += 1
        for ci in range(k):
            xs = outcome.responses[ci]
            if event:
                ev_silent[ci] += len(xs) - sum(xs)
            if xs[0]:
                first_alarm[ci] += 1
                if not event:
                    first_alarm_normal[ci] += 1
            else:
                first_silent[ci] += 1
                if event:
                    first_silent_event[ci] += 1
        for ti, decision in enumerate(outcome.decisions):
            if event and decision.declared_event:
                accept_event[ti] += 1
            if not event and not decision.declared_event:
                reject_normal[ti] += 1

    n_normal = n_trials - n_event
    class_stats = tuple(
        ClassSimStats(
            label=cls.label,
            count=cls.count,
            n_event_silent=ev_silent[ci],
            n_event_records=n_event * cls.count,
            n_first_silent_event=first_silent_event[ci],
            n_first_silent=first_silent[ci],
            n_first_alarm_normal=first_alarm_normal[ci],
            n_first_alarm=first_alarm[ci],
        )
        for ci, cls in enumerate(classes)
    )
    test_stats = tuple(
        TestSimStats(
            name=name,
            n_accept_event=accept_event[ti],
            n_event=n_event,
            n_reject_normal=reject_normal[ti],
            n_normal=n_normal,
        )
        for ti, (name, _) in enumerate(tests)
    )
    return SimReport(
        n_trials=n_trials,
        master_seed=master_seed,
        generator=GENERATOR_NAME,
        n_event=n_event,
        n_normal=n_normal,
        class_stats=class_stats,
        test_stats=test_stats,
    )
