"""Command-line front end: load a scenario file, run an analysis, emit tables.

Every command reads one scenario file (see scenario_io for the schema),
writes its table(s) to stdout or --out in text or CSV form, and exits 0
on success. Diagnostics go to stderr with a nonzero exit code.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .decision_tests import (
    BayesTest,
    MPTest,
    bayes_test,
    operating_characteristics,
    solve_mp_test,
)
from .estimation import (
    Condition,
    estimate_correct_response,
    estimate_detection,
    estimate_false_response,
    read_log_file,
)
from .model import DomainError, LossRatio, Prior
from .node_errors import node_error_report
from .scenario_io import ScenarioFile, load_scenario
from .score_dist import ClassAlarmLaw, score_distribution
from .simulator import GENERATOR_NAME, run_trials
from .tables import Table, render

_FORMAT = click.option(
    "--format", "fmt", type=click.Choice(["text", "csv"]), default="text", show_default=True,
    help="Output format.",
)
_OUT = click.option(
    "--out", type=click.Path(dir_okay=False, writable=True, path_type=Path), default=None,
    help="Write output to a file instead of stdout.",
)
_SCENARIO = click.option(
    "--scenario", "scenario_path", required=True,
    type=click.Path(exists=False, dir_okay=False, path_type=Path),
    help="Scenario file (YAML, schema 1).",
)
_WEIGHT_MODE = click.option(
    "--weight-mode", "weight_mode", type=click.Choice(["exact", "paper-approx"]),
    default=None, help="Override the scenario file's weight mode.",
)


def _effective_mode(sf: ScenarioFile, flag: str | None) -> str:
    mode = sf.weight_mode if flag is None else flag.replace("-", "_")
    if mode == "paper_approx" and sf.approx_weights is None:
        raise DomainError("weight mode paper-approx needs an approx: block in the scenario file")
    return mode


def _mode_overrides(sf: ScenarioFile, mode: str) -> dict:
    if mode == "exact":
        return {}
    return {"weights": sf.approx_weights, "event_alarm_probs": sf.approx_alarm_probs}


def _emit(tables: list[Table], fmt: str, out: Path | None) -> None:
    text = render(tables, fmt)
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text)


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@click.group()
@click.version_option(package_name="griddetect")
def main() -> None:
    """Exact decision tests and simulation for sensor-grid event detection."""


@main.command("errors")
@_SCENARIO
@_FORMAT
@_OUT
def cmd_errors(scenario_path: Path, fmt: str, out: Path | None) -> None:
    """Per-sensor error probabilities and posteriors over the prior sweep."""
    try:
        sf = load_scenario(scenario_path)
        rows = []
        for prior in sf.priors():
            report = node_error_report(sf.scenario, prior)
            for i, label in enumerate(report.labels):
                rows.append(
                    (
                        prior.event_prob,
                        label,
                        report.type1[i],
                        report.type2[i],
                        report.event_given_silent[i],
                        report.normal_given_alarm[i],
                    )
                )
        table = Table(
            title="node-errors",
            columns=("p_e", "class", "type1_silent_given_event", "type2_alarm_given_normal",
                     "event_given_silent", "normal_given_alarm"),
            rows=tuple(rows),
        )
        _emit([table], fmt, out)
    except DomainError as exc:
        _fail(exc)


@main.command("bayes")
@_SCENARIO
@_FORMAT
@_OUT
def cmd_bayes(scenario_path: Path, fmt: str, out: Path | None) -> None:
    """Bayes rules for every (prior, loss ratio) pair in the scenario."""
    try:
        sf = load_scenario(scenario_path)
        k = len(sf.scenario.topology.classes)
        rows = []
        for prior in sf.priors():
            for l in sf.loss_ratios:
                test = bayes_test(sf.scenario, prior, LossRatio(l))
                ops = operating_characteristics(test, sf.scenario)
                rows.append(
                    (prior.event_prob, l)
                    + tuple(test.weights)
                    + (test.threshold, test.applicable, ops.type1, ops.power)
                )
        table = Table(
            title="bayes-tests",
            columns=("p_e", "loss_ratio")
            + tuple(f"weight_{i + 1}" for i in range(k))
            + ("threshold", "applicable", "exact_type1", "exact_power"),
            rows=tuple(rows),
        )
        _emit([table], fmt, out)
    except DomainError as exc:
        _fail(exc)


@main.command("mp")
@_SCENARIO
@_FORMAT
@_OUT
@_WEIGHT_MODE
@click.option("--sizes", "sizes_arg", default=None,
              help="Comma-separated test sizes overriding the scenario file.")
def cmd_mp(
    scenario_path: Path, fmt: str, out: Path | None, weight_mode: str | None, sizes_arg: str | None
) -> None:
    """Most-powerful tests for each size; alpha column shows 1 - size."""
    try:
        sf = load_scenario(scenario_path)
        mode = _effective_mode(sf, weight_mode)
        sizes = sf.sizes
        if sizes_arg is not None:
            sizes = tuple(float(s) for s in sizes_arg.split(","))
        if not sizes:
            raise DomainError("no test sizes given (scenario sizes: or --sizes)")
        k = len(sf.scenario.topology.classes)
        rows = []
        for size in sizes:
            test = solve_mp_test(sf.scenario, size, **_mode_overrides(sf, mode))
            ops = operating_characteristics(test, sf.scenario)
            rows.append(
                (1.0 - size, size)
                + tuple(test.weights)
                + (test.threshold, test.boundary_prob, test.exact_size,
                   test.exact_power, ops.type1, ops.power)
            )
        table = Table(
            title=f"mp-tests ({mode})",
            columns=("alpha_printed", "size")
            + tuple(f"weight_{i + 1}" for i in range(k))
            + ("threshold", "boundary_prob", "solved_size", "solved_power",
               "true_type1", "true_power"),
            rows=tuple(rows),
        )
        _emit([table], fmt, out)
    except DomainError as exc:
        _fail(exc)


@main.command("dist")
@_SCENARIO
@_FORMAT
@_OUT
@_WEIGHT_MODE
@click.option("--under", type=click.Choice(["event", "normal"]), default="event",
              show_default=True, help="Hypothesis for the alarm law.")
def cmd_dist(
    scenario_path: Path, fmt: str, out: Path | None, weight_mode: str | None, under: str
) -> None:
    """Dump the exact score distribution for debugging."""
    try:
        sf = load_scenario(scenario_path)
        mode = _effective_mode(sf, weight_mode)
        stats = sf.scenario.derived()
        counts = sf.scenario.topology.counts
        if mode == "paper_approx":
            weights = sf.approx_weights
            q_event = sf.approx_alarm_probs or stats.alarm_probs
        else:
            weights = stats.weights
            q_event = stats.alarm_probs
        q = q_event if under == "event" else (sf.scenario.channel.p_w,) * len(counts)
        dist = score_distribution(weights, ClassAlarmLaw(counts, q))
        rows = []
        cum = 0.0
        for atom in dist.atoms:
            cum += atom.prob
            rows.append((atom.value, atom.prob, cum, len(atom.support)))
        table = Table(
            title=f"score-distribution under {under} ({mode})",
            columns=("value", "prob", "cumulative", "n_count_tuples"),
            rows=tuple(rows),
        )
        _emit([table], fmt, out)
    except DomainError as exc:
        _fail(exc)


def _sim_tests(
    sf: ScenarioFile, prior: Prior, mode: str
) -> list[tuple[str, MPTest | BayesTest]]:
    tests: list[tuple[str, MPTest | BayesTest]] = []
    for l in sf.loss_ratios:
        tests.append((f"bayes l={l:g}", bayes_test(sf.scenario, prior, LossRatio(l))))
    for size in sf.sizes:
        tests.append(
            (f"mp size={size:g}", solve_mp_test(sf.scenario, size, **_mode_overrides(sf, mode)))
        )
    return tests


@main.command("simulate")
@_SCENARIO
@_FORMAT
@_OUT
@_WEIGHT_MODE
@click.option("--trials", type=int, default=None, help="Override simulation.n_trials.")
@click.option("--seed", type=int, default=None, help="Override simulation.master_seed.")
def cmd_simulate(
    scenario_path: Path, fmt: str, out: Path | None, weight_mode: str | None,
    trials: int | None, seed: int | None,
) -> None:
    """Monte Carlo runs per prior with empirical vs exact columns."""
    try:
        sf = load_scenario(scenario_path)
        mode = _effective_mode(sf, weight_mode)
        if not sf.event_priors:
            raise DomainError("simulation needs a prior sweep (prior.p_e)")
        n_trials = trials if trials is not None else sf.simulation.n_trials
        master_seed = seed if seed is not None else sf.simulation.master_seed
        rows = []
        for prior in sf.priors():
            tests = _sim_tests(sf, prior, mode)
            report = run_trials(sf.scenario, prior, tests, n_trials, master_seed)
            errors = node_error_report(sf.scenario, prior)
            for i, cs in enumerate(report.class_stats):
                for stat, emp, exact, num, denom in (
                    ("silent_given_event", cs.silence_rate_event, errors.type1[i],
                     cs.n_event_silent, cs.n_event_records),
                    ("event_given_silent", cs.event_given_silent, errors.event_given_silent[i],
                     cs.n_first_silent_event, cs.n_first_silent),
                    ("normal_given_alarm", cs.normal_given_alarm, errors.normal_given_alarm[i],
                     cs.n_first_alarm_normal, cs.n_first_alarm),
                ):
                    rows.append((prior.event_prob, stat, cs.label, emp, exact,
                                 abs(emp - exact), num, denom))
            for (name, test), ts in zip(tests, report.test_stats):
                ops = operating_characteristics(test, sf.scenario)
                rows.append((prior.event_prob, "accept_given_event", name,
                             ts.accept_given_event, 1.0 - ops.type1,
                             abs(ts.accept_given_event - (1.0 - ops.type1)),
                             ts.n_accept_event, ts.n_event))
                rows.append((prior.event_prob, "reject_given_normal", name,
                             ts.reject_given_normal, ops.power,
                             abs(ts.reject_given_normal - ops.power),
                             ts.n_reject_normal, ts.n_normal))
        table = Table(
            title=(
                f"simulation n_trials={n_trials} master_seed={master_seed} "
                f"rng={GENERATOR_NAME} weights={mode}"
            ),
            columns=("p_e", "statistic", "target", "empirical", "exact",
                     "abs_delta", "numerator", "denominator"),
            rows=tuple(rows),
        )
        _emit([table], fmt, out)
    except DomainError as exc:
        _fail(exc)


@main.command("estimate")
@click.argument("log_file", type=click.Path(exists=False, dir_okay=False, path_type=Path))
@_FORMAT
@_OUT
def cmd_estimate(log_file: Path, fmt: str, out: Path | None) -> None:
    """Parameter estimates with standard errors from a calibration log file.

    LOG_FILE is CSV with header condition,trial,class_index,detected,responded;
    one sensor record per line, records sharing a trial id form one trial.
    """
    try:
        logs = read_log_file(log_file)
        event_logs = [lg for lg in logs if lg.condition is Condition.CONTROLLED_EVENT]
        normal_logs = [lg for lg in logs if lg.condition is Condition.NORMAL]
        rows = []
        if event_logs:
            for ci, est in estimate_detection(event_logs).items():
                rows.append((f"p_detect[class {ci}]", est.value, est.std_error, est.n_logs))
            est = estimate_correct_response(event_logs)
            rows.append(("p_c", est.value, est.std_error, est.n_logs))
        if normal_logs:
            est = estimate_false_response(normal_logs)
            rows.append(("p_w", est.value, est.std_error, est.n_logs))
        if not rows:
            raise DomainError("log file contains no usable records")
        table = Table(
            title="parameter-estimates",
            columns=("parameter", "estimate", "std_error", "n_logs"),
            rows=tuple(rows),
        )
        _emit([table], fmt, out)
    except DomainError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
