"""Diagnostic-accuracy comparison of a full network against its reduction.

The pipeline: reduce the network once, sample complete test cases from the
FULL network, reveal each case's findings cumulatively over five phases,
compute every disease's posterior in both networks at every phase, then
aggregate true-positive means (posterior of a disease over the cases where
it is truly present), false-positive means (cases where it is absent), and
a paired t statistic on the log-odds differences.

Everything is deterministic given the seed: case k is sampled with seed
``seed + k``, and per-case work is order-independent, so results are
byte-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from collections.abc import Mapping

from .errors import DegenerateVarianceError, ExhaustionError
from .inference import posterior
from .model import Assignment, Network, NodeKind, PHASES
from .reduction import level_reduce
from .rng import SplitMix64
from .sampling import sample_world
from .stats import is_significant, log_odds, paired_t

_RETRY_LIMIT = 10_000
_RETRY_SALT = 0xD1B54A32D192ED03


@dataclass(frozen=True)
class TestCase:
    """One sampled world: the true disease states and every finding value,
    bucketed by the phase in which the finding is revealed."""

    case_id: int
    true_diseases: Assignment
    findings_by_phase: Mapping[int, Assignment]

    def cumulative_evidence(self, phase: int) -> Assignment:
        """Union of the finding buckets for phases 1..phase."""
        merged = Assignment()
        for k in PHASES[: phase]:
            merged = merged.union(self.findings_by_phase[k])
        return merged


def generate_cases(
    net: Network, n_cases: int, seed: int, require_positive: bool = False
) -> list[TestCase]:
    """Sample test cases by forward sampling the network.

    Case k uses seed ``seed + k``. With ``require_positive``, worlds with no
    present disease are rejected and redrawn from a per-case retry stream
    (bounded; exhaustion is an error), so accepted cases never depend on
    other cases' draws.
    """
    net.require_valid()
    if n_cases < 1:
        raise ExhaustionError("n_cases must be at least 1")
    diseases = [n.id for n in net.nodes_of_kind(NodeKind.DISEASE)]
    findings = net.nodes_of_kind(NodeKind.FINDING)
    if require_positive and all(n.prior == 0.0 for n in net.nodes_of_kind(NodeKind.DISEASE)):
        raise ExhaustionError("require_positive with all-zero disease priors")
    cases = []
    for case_id in range(n_cases):
        world = sample_world(net, seed + case_id)
        if require_positive:
            retry = SplitMix64((seed + case_id) ^ _RETRY_SALT)
            attempts = 0
            while not any(world[d] for d in diseases):
                attempts += 1
                if attempts > _RETRY_LIMIT:
                    raise ExhaustionError(
                        f"no world with a present disease after {_RETRY_LIMIT} retries"
                    )
                world = sample_world(net, retry.next_u64())
        buckets = {k: {} for k in PHASES}
        for node in findings:
            buckets[node.phase][node.id] = world[node.id]
        cases.append(
            TestCase(
                case_id,
                Assignment({d: world[d] for d in diseases}),
                {k: Assignment(v) for k, v in buckets.items()},
            )
        )
    return cases


@dataclass(frozen=True)
class CellStats:
    """Aggregates for one (phase, disease) cell.

    ``two`` columns come from the reduced network, ``three`` from the full
    one. The t statistic is over log-odds differences two - three across
    the present cases; it is None when fewer than two present cases exist
    or the differences are constant and nonzero.
    """

    phase: int
    disease: str
    n_present: int
    n_absent: int
    mean_tp_two: float | None
    mean_tp_three: float | None
    mean_fp_two: float | None
    mean_fp_three: float | None
    t_stat: float | None
    df: int | None
    sig95: bool | None
    sig975: bool | None


@dataclass(frozen=True)
class PhaseStats:
    """Pooled per-phase aggregates over all present (disease, case) pairs."""

    phase: int
    n_pairs: int
    mean_tp_two: float | None
    mean_tp_three: float | None
    mean_abs_diff: float | None
    t_stat: float | None
    df: int | None
    sig95: bool | None
    sig975: bool | None


@dataclass(frozen=True)
class ExperimentSummary:
    network_name: str
    n_cases: int
    seed: int
    cells: tuple[CellStats, ...]
    phases: tuple[PhaseStats, ...]
    param_count_original: int
    param_count_reduced: int


# Worker-process state: networks are parsed once per worker instead of being
# pickled into every task.
_WORKER: dict = {}


def _init_worker(full_text: str, reduced_text: str, method: str) -> None:
    from .fileformat import parse_network

    _WORKER["full"] = parse_network(full_text)
    _WORKER["reduced"] = parse_network(reduced_text)
    _WORKER["method"] = method


def _eval_case(task):
    case_id, evidence_by_phase = task
    full = _WORKER["full"]
    reduced = _WORKER["reduced"]
    method = _WORKER["method"]
    out = []
    for evidence in evidence_by_phase:
        full_post = posterior(full, evidence, method=method).posteriors
        reduced_post = posterior(reduced, evidence, method=method).posteriors
        out.append((full_post, reduced_post))
    return case_id, out


def run_experiment(
    full: Network,
    n_cases: int,
    seed: int,
    *,
    jobs: int = 1,
    method: str = "elimination",
) -> ExperimentSummary:
    """Run the full comparison protocol on one network.

    Inference defaults to variable elimination: the experiment evaluates
    thousands of queries, and the engines agree to within 1e-10 anyway
    (enforced by the test suite).
    """
    full.require_valid()
    report = level_reduce(full)
    reduced = report.reduced
    cases = generate_cases(full, n_cases, seed)
    diseases = sorted(n.id for n in full.nodes_of_kind(NodeKind.DISEASE))

    tasks = []
    for case in cases:
        evidence_by_phase = [
            dict(case.cumulative_evidence(phase)) for phase in PHASES
        ]
        tasks.append((case.case_id, evidence_by_phase))

    if jobs <= 1:
        _init_worker(_serialize(full), _serialize(reduced), method)
        results = [_eval_case(task) for task in tasks]
        _WORKER.clear()
    else:
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_init_worker,
            initargs=(_serialize(full), _serialize(reduced), method),
        ) as pool:
            results = list(pool.map(_eval_case, tasks, chunksize=max(1, n_cases // (jobs * 4))))
    results.sort(key=lambda item: item[0])

    cells = []
    phase_rows = []
    for phase in PHASES:
        pooled_two: list[float] = []
        pooled_three: list[float] = []
        for did in diseases:
            tp_two, tp_three, fp_two, fp_three = [], [], [], []
            for case, (_, per_phase) in zip(cases, results):
                full_post, reduced_post = per_phase[phase - 1]
                if case.true_diseases[did]:
                    tp_three.append(full_post[did])
                    tp_two.append(reduced_post[did])
                else:
                    fp_three.append(full_post[did])
                    fp_two.append(reduced_post[did])
            pooled_two.extend(tp_two)
            pooled_three.extend(tp_three)
            t, df, s95, s975 = _paired_log_odds_t(tp_two, tp_three)
            cells.append(
                CellStats(
                    phase=phase,
                    disease=did,
                    n_present=len(tp_two),
                    n_absent=len(fp_two),
                    mean_tp_two=_mean(tp_two),
                    mean_tp_three=_mean(tp_three),
                    mean_fp_two=_mean(fp_two),
                    mean_fp_three=_mean(fp_three),
                    t_stat=t,
                    df=df,
                    sig95=s95,
                    sig975=s975,
                )
            )
        t, df, s95, s975 = _paired_log_odds_t(pooled_two, pooled_three)
        abs_diffs = [abs(x - y) for x, y in zip(pooled_two, pooled_three)]
        phase_rows.append(
            PhaseStats(
                phase=phase,
                n_pairs=len(pooled_two),
                mean_tp_two=_mean(pooled_two),
                mean_tp_three=_mean(pooled_three),
                mean_abs_diff=_mean(abs_diffs),
                t_stat=t,
                df=df,
                sig95=s95,
                sig975=s975,
            )
        )

    return ExperimentSummary(
        network_name=full.name,
        n_cases=n_cases,
        seed=seed,
        cells=tuple(cells),
        phases=tuple(phase_rows),
        param_count_original=report.param_count_original,
        param_count_reduced=report.param_count_reduced,
    )


def _serialize(net: Network) -> str:
    """Worker-transport encoding; the name is irrelevant to the posteriors,
    so names the file format would reject are substituted."""
    from .fileformat import serialize_network

    if not net.name or any(c.isspace() for c in net.name):
        net = Network("net", net.nodes, net.edges)
    return serialize_network(net)


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


# Log-odds differences below this are floating-point noise (the transform
# itself clamps at 1e-9); without the floor, two arithmetically equivalent
# networks could show a sizable t built entirely from last-ulp wobble.
_LOG_ODDS_NOISE_FLOOR = 1e-9


def _paired_log_odds_t(two: list[float], three: list[float]):
    if len(two) < 2:
        return None, None, None, None
    lo_two = [log_odds(p) for p in two]
    lo_three = [log_odds(p) for p in three]
    if max(abs(a - b) for a, b in zip(lo_two, lo_three)) < _LOG_ODDS_NOISE_FLOOR:
        return 0.0, len(two) - 1, False, False
    try:
        t, df = paired_t(lo_two, lo_three)
    except DegenerateVarianceError:
        return None, None, None, None
    return t, df, is_significant(t, df, 0.95), is_significant(t, df, 0.975)
