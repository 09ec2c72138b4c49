"""
Exhaustive and Monte-Carlo classification of connection sets.

A set S is exceptional when Aut(Cay(R, S)) is strictly larger than the
baseline: the canonical B for graphs, the regular R for digraphs. The
baseline is always asserted to lie inside Aut first; since containment
holds for every S, a failure means a bug and aborts the run.
"""

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple
import json
import logging
import math
import statistics
import time

import pandas as pd

from .models import CensusMode, CensusRecord, CensusSummary, EpsilonBound, Verdict
from ..config.census_config import get_default_config
from ..core import monitoring
from ..core.canonical import build_canonical_B, regular_representation
from ..core.cayley import (
    ConnectionSet,
    build_cayley,
    count_inverse_closed,
    sample_inverse_closed_index,
    sample_subset,
)
from ..core.dicyclic import DicyclicGroup, element_order_le2_count, is_q8_x_c2l
from ..core.exceptions import CapExceededError, ContainmentViolation, DomainError, StructuralError
from ..core.group_spec import parse_group_spec
from ..search.automorphism_search import AutomorphismSearch
from ..search.perm_group import is_subgroup

logger = logging.getLogger(__name__)

# (set index or mask, seed, draw)
WorkItem = Tuple[int, Optional[int], Optional[int]]


class RecordSink:
    """Streams records to a JSON-lines file, one object per line."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self._fh = None
        self.written = 0

    def __enter__(self) -> "RecordSink":
        if self.path:
            self._fh = open(self.path, "w", encoding="utf-8")
        return self

    def __exit__(self, *exc) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def write(self, record: CensusRecord) -> None:
        if self._fh is not None:
            self._fh.write(record.model_dump_json() + "\n")
        self.written += 1


def read_records(path: str) -> List[CensusRecord]:
    with open(path, encoding="utf-8") as fh:
        return [CensusRecord.model_validate(json.loads(line)) for line in fh if line.strip()]


class CensusRunner:
    """
    Classifies connection sets of one group against a fixed baseline.

    The baseline group is built once; workers rebuild their own runner
    from the group spec and share nothing mutable.
    """

    def __init__(
        self,
        group: DicyclicGroup,
        directed: bool = False,
        config: Optional[Dict[str, Any]] = None
    ):
        self.config = config or get_default_config()
        self.logger = logging.getLogger(__name__)
        self.group = group
        self.directed = directed

        max_degree = self.config['search']['max_degree']
        if group.n > max_degree:
            raise CapExceededError(
                f"{group.spec} has order {group.n}, above the automorphism search cap of {max_degree}"
            )
        if directed:
            self.baseline = regular_representation(group)
        else:
            self.baseline = build_canonical_B(group).group
        self.baseline_order = self.baseline.order()

    def classify(self, S: ConnectionSet, item: Optional[WorkItem] = None) -> CensusRecord:
        """
        Compute Aut(Cay(R, S)) and compare it with the baseline.

        Raises:
            ContainmentViolation: baseline not contained in Aut
        """
        index, seed, draw = item if item is not None else (None, None, None)
        start = time.perf_counter()
        graph = build_cayley(self.group, S, directed=self.directed)
        aut = AutomorphismSearch(graph, self.config).run()
        if not is_subgroup(self.baseline, aut):
            self.logger.error(
                f"baseline not contained in Aut for {self.group.spec}, set {S.to_hex()}, "
                f"directed={self.directed}"
            )
            raise ContainmentViolation(
                f"baseline of order {self.baseline_order} is not contained in Aut(Cay) "
                f"for {self.group.spec} with S={S.to_hex()}"
            )
        aut_order = aut.order()
        verdict = Verdict.EQUAL if aut_order == self.baseline_order else Verdict.PROPER_SUPERGROUP
        elapsed = time.perf_counter() - start
        self.logger.debug(f"{self.group.spec} S={S.to_hex()}: |Aut|={aut_order} {verdict.value}")
        return CensusRecord(
            group=self.group.spec,
            set_index=index,
            seed=seed,
            draw=draw,
            set_hex=S.to_hex(),
            directed=self.directed,
            aut_order=aut_order,
            b_order=self.baseline_order,
            verdict=verdict,
            elapsed=elapsed,
        )

    def connection_set(self, item: WorkItem) -> ConnectionSet:
        index, _, _ = item
        if self.directed:
            return ConnectionSet(self.group.n, index)
        return ConnectionSet.from_index(self.group, index)

    def classify_items(self, items: Sequence[WorkItem]) -> List[CensusRecord]:
        return [self.classify(self.connection_set(item), item) for item in items]

    # ------------------------------------------------------------------
    # runs

    def _execute(self, items: List[WorkItem], sink: Optional[RecordSink]) -> List[CensusRecord]:
        census = self.config['census']
        jobs = max(1, int(census['jobs']))
        chunk_size = max(1, int(census['chunk_size']))
        chunks = [items[i:i + chunk_size] for i in range(0, len(items), chunk_size)]

        records: List[CensusRecord] = []
        if jobs == 1 or len(chunks) <= 1:
            batches: Iterable[List[CensusRecord]] = (self.classify_items(chunk) for chunk in chunks)
            self._collect(batches, records, sink)
        else:
            with ProcessPoolExecutor(
                max_workers=jobs,
                initializer=_init_worker,
                initargs=(self.group.spec, self.directed, self.config),
            ) as pool:
                # map yields in submission order, so records merge by index
                self._collect(pool.map(_classify_chunk, chunks), records, sink)
        return records

    def _collect(
        self,
        batches: Iterable[List[CensusRecord]],
        records: List[CensusRecord],
        sink: Optional[RecordSink]
    ) -> None:
        for batch in batches:
            for record in batch:
                monitoring.track_classification(record.verdict.value, record.directed, record.elapsed)
                if sink is not None:
                    sink.write(record)
                records.append(record)

    def run_exhaustive(self, sink: Optional[RecordSink] = None) -> Tuple[CensusSummary, List[CensusRecord]]:
        """
        Classify every inverse-closed set (every subset, for digraphs).

        Raises:
            CapExceededError: more sets than the enumeration cap
        """
        G = self.group
        enumeration = self.config['enumeration']
        if self.directed:
            total, cap = 2 ** G.n, enumeration['directed_max_sets']
        else:
            total, cap = count_inverse_closed(G), enumeration['max_sets']
        if total > cap:
            raise CapExceededError(
                f"{G.spec} has {total} {'subsets' if self.directed else 'inverse-closed sets'}, "
                f"above the cap of {cap}; use a sampled census instead"
            )
        monitoring.track_run(CensusMode.EXHAUSTIVE.value)
        self.logger.info(f"Exhaustive census of {G.spec} (directed={self.directed}): {total} sets")

        records = self._execute([(index, None, None) for index in range(total)], sink)
        summary = summarize(G, records, CensusMode.EXHAUSTIVE, self.directed, config=self.config)
        if not self.directed:
            bound = epsilon_bound(G)
            satisfied = check_bound(summary, G, config=self.config)
            summary = summary.model_copy(update={"epsilon": bound, "bound_satisfied": satisfied})
        self.logger.info(
            f"Exhaustive census of {G.spec} done: {summary.exceptional}/{summary.total} exceptional"
        )
        return summary, records

    def run_sampled(
        self,
        trials: int,
        seed: int,
        sink: Optional[RecordSink] = None
    ) -> Tuple[CensusSummary, List[CensusRecord]]:
        """
        Classify `trials` independent uniform sets; draw j is seeded by [seed, j].

        Graphs draw uniform inverse-closed sets, digraphs uniform subsets.
        """
        if trials < 1:
            raise StructuralError(f"trials must be at least 1, got {trials}")
        G = self.group
        monitoring.track_run(CensusMode.SAMPLED.value)
        self.logger.info(
            f"Sampled census of {G.spec} (directed={self.directed}): {trials} trials, seed {seed}"
        )
        items: List[WorkItem] = []
        for draw in range(trials):
            entropy = [seed, draw]
            if self.directed:
                index = sample_subset(G, entropy).mask
            else:
                index = sample_inverse_closed_index(G, entropy)
            items.append((index, seed, draw))

        records = self._execute(items, sink)
        summary = summarize(G, records, CensusMode.SAMPLED, self.directed, seed=seed, config=self.config)
        self.logger.info(
            f"Sampled census of {G.spec} done: proportion {summary.proportion:.4f} "
            f"+/- {summary.ci_halfwidth:.4f}"
        )
        return summary, records


# ----------------------------------------------------------------------
# worker processes

_WORKER_RUNNER: Optional[CensusRunner] = None


def _init_worker(spec: str, directed: bool, config: Dict[str, Any]) -> None:
    global _WORKER_RUNNER
    _WORKER_RUNNER = CensusRunner(parse_group_spec(spec), directed, config)


def _classify_chunk(items: List[WorkItem]) -> List[CensusRecord]:
    return _WORKER_RUNNER.classify_items(items)


# ----------------------------------------------------------------------
# statistics


def _z_value(confidence: float) -> float:
    return statistics.NormalDist().inv_cdf(0.5 + confidence / 2)


def wald_halfwidth(exceptional: int, total: int, confidence: float = 0.95) -> float:
    """z * sqrt(p (1 - p) / N)."""
    if total <= 0:
        raise StructuralError("confidence interval needs at least one trial")
    p = exceptional / total
    return _z_value(confidence) * math.sqrt(p * (1 - p) / total)


def wilson_interval(exceptional: int, total: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if total <= 0:
        raise StructuralError("confidence interval needs at least one trial")
    z = _z_value(confidence)
    p = exceptional / total
    denom = 1 + z * z / total
    centre = (p + z * z / (2 * total)) / denom
    spread = z * math.sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denom
    return max(0.0, centre - spread), min(1.0, centre + spread)


def summarize(
    G: DicyclicGroup,
    records: Sequence[CensusRecord],
    mode: CensusMode,
    directed: bool,
    seed: Optional[int] = None,
    config: Optional[Dict[str, Any]] = None
) -> CensusSummary:
    """Counts and intervals; exhaustive runs are exact and get zero-width intervals."""
    config = config or get_default_config()
    confidence = config['census']['confidence']
    total = len(records)
    exceptional = sum(1 for r in records if r.verdict is Verdict.PROPER_SUPERGROUP)
    proportion = exceptional / total if total else 0.0
    if mode is CensusMode.SAMPLED and total:
        halfwidth = wald_halfwidth(exceptional, total, confidence)
        low, high = wilson_interval(exceptional, total, confidence)
    else:
        halfwidth, low, high = 0.0, proportion, proportion
    return CensusSummary(
        group=G.spec,
        n=G.n,
        m=element_order_le2_count(G),
        mode=mode,
        directed=directed,
        total=total,
        exceptional=exceptional,
        proportion=proportion,
        confidence=confidence,
        ci_halfwidth=halfwidth,
        ci_low=low,
        ci_high=high,
        seed=seed,
    )


# ----------------------------------------------------------------------
# bounds


def epsilon_exponent(n: int, kind: str) -> float:
    """
    log2 of epsilon.

    generic: e(n) = -n/48 + 2 (log2 n)^2 + 4
    q8e:     e(n) = -n/512 + (log2 n)^2 + 2

    The rational part is exact; only the (log2 n)^2 term is a double.
    """
    log_sq = math.log2(n) ** 2
    if kind == "q8e":
        return float(Fraction(-n, 512) + 2) + log_sq
    if kind == "generic":
        return float(Fraction(-n, 48) + 4) + 2 * log_sq
    raise DomainError(f"unknown bound kind {kind!r}")


def epsilon_bound(G: DicyclicGroup) -> EpsilonBound:
    """
    log2 of the bound on exceptional inverse-closed sets: e(n) over
    2^(m/2 + n/2) sets generically, over 2^(5n/8) sets for Q8 x C2^l.
    """
    n = G.n
    m = element_order_le2_count(G)
    kind = "q8e" if is_q8_x_c2l(G) else "generic"
    exponent = epsilon_exponent(n, kind)
    total_log2 = 5 * n / 8 if kind == "q8e" else (m + n) / 2
    return EpsilonBound(
        group=G.spec,
        n=n,
        m=m,
        kind=kind,
        exponent=exponent,
        total_log2=total_log2,
        bound_log2=total_log2 + exponent,
        vacuous=exponent >= 0,
    )


def check_bound(
    summary: CensusSummary,
    G: DicyclicGroup,
    exponent_override: Optional[float] = None,
    config: Optional[Dict[str, Any]] = None
) -> bool:
    """
    True iff the exact exceptional count is within the bound (log2 scale,
    with census.bound_slack_log2 of slack).

    Args:
        exponent_override: replaces e(n), to exercise the comparator

    Raises:
        DomainError: summary is sampled or directed
    """
    config = config or get_default_config()
    if summary.mode is not CensusMode.EXHAUSTIVE:
        raise DomainError("the bound concerns exact counts; sampled summaries cannot be checked")
    if summary.directed:
        raise DomainError("the bound concerns inverse-closed sets; directed summaries cannot be checked")
    bound = epsilon_bound(G)
    exponent = bound.exponent if exponent_override is None else exponent_override
    bound_log2 = bound.total_log2 + exponent
    if exponent >= 0:
        logger.warning(f"{G.spec}: bound exponent {exponent:.6f} >= 0, comparison is vacuous")
    if summary.exceptional == 0:
        return True
    slack = config['census']['bound_slack_log2']
    return math.log2(summary.exceptional) <= bound_log2 + slack


# ----------------------------------------------------------------------
# module-level operations


def classify(
    G: DicyclicGroup,
    S: ConnectionSet,
    directed: bool = False,
    config: Optional[Dict[str, Any]] = None
) -> CensusRecord:
    return CensusRunner(G, directed, config).classify(S)


def run_exhaustive(
    G: DicyclicGroup,
    directed: bool = False,
    sink: Optional[RecordSink] = None,
    config: Optional[Dict[str, Any]] = None
) -> Tuple[CensusSummary, List[CensusRecord]]:
    return CensusRunner(G, directed, config).run_exhaustive(sink)


def run_sampled(
    G: DicyclicGroup,
    trials: int,
    seed: int,
    directed: bool = False,
    sink: Optional[RecordSink] = None,
    config: Optional[Dict[str, Any]] = None
) -> Tuple[CensusSummary, List[CensusRecord]]:
    return CensusRunner(G, directed, config).run_sampled(trials, seed, sink)


def run_trend(
    groups: Sequence[DicyclicGroup],
    trials: int,
    seed: int,
    directed: bool = False,
    config: Optional[Dict[str, Any]] = None
) -> pd.DataFrame:
    """
    Exceptional proportion against n over a family of groups, sorted by n.

    Whether the proportions decrease is logged, not asserted.
    """
    if not groups:
        raise StructuralError("trend needs at least one group")
    rows = []
    for G in groups:
        summary, _ = run_sampled(G, trials, seed, directed=directed, config=config)
        rows.append({
            "group": summary.group,
            "n": summary.n,
            "m": summary.m,
            "kind": "q8e" if is_q8_x_c2l(G) else "generic",
            "trials": summary.total,
            "exceptional": summary.exceptional,
            "proportion": summary.proportion,
            "ci_halfwidth": summary.ci_halfwidth,
            "ci_low": summary.ci_low,
            "ci_high": summary.ci_high,
        })
    frame = pd.DataFrame(rows).sort_values("n", kind="stable").reset_index(drop=True)
    if len(frame) > 1:
        decreasing = bool((frame["proportion"].diff().dropna() <= 0).all())
        logger.info(f"Trend over n={frame['n'].tolist()}: proportions non-increasing = {decreasing}")
    return frame


def write_summary_csv(summaries: Sequence[CensusSummary], path: str) -> None:
    pd.DataFrame([s.csv_row() for s in summaries]).to_csv(path, index=False)
