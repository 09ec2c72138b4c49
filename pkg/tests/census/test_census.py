"""
Tests for census runs, summaries, confidence intervals and bounds.
"""

import pytest
from pydantic import ValidationError

from src.census.census import (
    CensusRunner,
    RecordSink,
    check_bound,
    classify,
    epsilon_bound,
    epsilon_exponent,
    read_records,
    run_exhaustive,
    run_sampled,
    run_trend,
    wald_halfwidth,
    wilson_interval,
    write_summary_csv,
)
from src.census.models import CensusMode, CensusRecord, CensusSummary, Verdict
from src.core.cayley import ConnectionSet
from src.core.exceptions import CapExceededError, DomainError, StructuralError


def test_classify_empty_set(q8):
    """Test the edgeless graph on Q8 is exceptional"""
    record = classify(q8, ConnectionSet.empty(q8.n))
    assert record.aut_order == 40320
    assert record.b_order == 64
    assert record.verdict is Verdict.PROPER_SUPERGROUP
    assert record.set_hex == "00"


def test_classify_complete_graph(q8):
    """Test the complete graph on Q8 is exceptional"""
    record = classify(q8, ConnectionSet.from_hex(q8.n, "fe"))
    assert record.aut_order == 40320
    assert record.verdict is Verdict.PROPER_SUPERGROUP


def test_classify_directed_baseline(dic_c6):
    """Test digraphs are compared with R"""
    runner = CensusRunner(dic_c6, directed=True)
    assert runner.baseline_order == 12
    record = runner.classify(ConnectionSet.from_members(dic_c6.n, [1]))
    assert record.directed
    assert record.b_order == 12
    assert record.aut_order >= 12


def test_quaternion_exhaustive(q8, config):
    """Test the exhaustive Q8 census"""
    summary, records = run_exhaustive(q8, config=config)
    assert summary.mode is CensusMode.EXHAUSTIVE
    assert summary.total == 32 == len(records)
    assert [r.set_index for r in records] == list(range(32))
    assert all(r.aut_order % 64 == 0 for r in records)
    assert summary.exceptional == sum(r.verdict is Verdict.PROPER_SUPERGROUP for r in records)
    assert summary.exceptional >= 1
    assert summary.ci_halfwidth == 0.0
    assert summary.epsilon.kind == "q8e"
    assert summary.epsilon.vacuous
    assert summary.bound_satisfied is True


def test_exhaustive_is_reproducible(q8, config):
    """Test re-running an exhaustive census gives the same records"""
    _, first = run_exhaustive(q8, config=config)
    _, second = run_exhaustive(q8, config=config)
    assert [r.fingerprint() for r in first] == [r.fingerprint() for r in second]


def test_parallel_matches_serial(q8, config):
    """Test records are identical and ordered with worker processes"""
    config['census']['chunk_size'] = 8
    _, serial = run_exhaustive(q8, config=config)
    config['census']['jobs'] = 2
    _, parallel = run_exhaustive(q8, config=config)
    assert [r.fingerprint() for r in parallel] == [r.fingerprint() for r in serial]


def test_exhaustive_cap(q8e1, config):
    """Test the enumeration cap"""
    config['enumeration']['max_sets'] = 100
    with pytest.raises(CapExceededError):
        run_exhaustive(q8e1, config=config)
    config['search']['max_degree'] = 8
    with pytest.raises(CapExceededError):
        CensusRunner(q8e1, config=config)


def test_sampled_is_reproducible(dic_c6, config):
    """Test sampled records depend only on (seed, draw)"""
    summary, first = run_sampled(dic_c6, 12, seed=4, config=config)
    _, second = run_sampled(dic_c6, 12, seed=4, config=config)
    assert [r.fingerprint() for r in first] == [r.fingerprint() for r in second]
    assert [r.draw for r in first] == list(range(12))
    assert all(r.seed == 4 for r in first)
    assert summary.mode is CensusMode.SAMPLED
    assert summary.ci_low <= summary.proportion <= summary.ci_high
    assert summary.epsilon is None


def test_sampled_prefix_is_stable(dic_c6, config):
    """Test draw j is the same whatever the number of trials"""
    _, short = run_sampled(dic_c6, 5, seed=1, config=config)
    _, long = run_sampled(dic_c6, 10, seed=1, config=config)
    assert [r.set_hex for r in short] == [r.set_hex for r in long[:5]]


def test_directed_sampled(dic_c6, config):
    """Test a directed sampled census"""
    summary, records = run_sampled(dic_c6, 20, seed=0, directed=True, config=config)
    assert summary.directed
    assert summary.total == 20
    assert all(r.b_order == 12 for r in records)


def test_sampled_needs_trials(q8):
    """Test zero trials are refused"""
    with pytest.raises(StructuralError):
        run_sampled(q8, 0, seed=0)


def test_epsilon_exponent_values():
    """Test the exponent at known points"""
    assert epsilon_exponent(8, "q8e") == 10.984375
    assert epsilon_exponent(2 ** 20, "generic") == pytest.approx(-21041.333333, abs=1e-5)
    assert epsilon_exponent(2 ** 20, "generic") < 0
    with pytest.raises(DomainError):
        epsilon_exponent(8, "dihedral")


def test_epsilon_bound(dic_c6, q8e1):
    """Test the bound's set counts and vacuity"""
    generic = epsilon_bound(dic_c6)
    assert generic.kind == "generic"
    assert generic.total_log2 == 7
    assert generic.vacuous
    quaternion = epsilon_bound(q8e1)
    assert quaternion.kind == "q8e"
    assert quaternion.total_log2 == 10
    assert quaternion.bound_log2 == pytest.approx(10 + quaternion.exponent)


def test_check_bound_comparator(q8, config):
    """Test a forced negative exponent makes the bound fail"""
    summary, _ = run_exhaustive(q8, config=config)
    assert check_bound(summary, q8, config=config)
    assert not check_bound(summary, q8, exponent_override=-100.0, config=config)


def test_check_bound_rejects_sampled_and_directed(q8, dic_c6, config):
    """Test the bound is only checked on exact undirected counts"""
    sampled, _ = run_sampled(q8, 3, seed=0, config=config)
    with pytest.raises(DomainError):
        check_bound(sampled, q8)
    directed = sampled.model_copy(update={"mode": CensusMode.EXHAUSTIVE, "directed": True})
    with pytest.raises(DomainError):
        check_bound(directed, q8)


def test_wald_halfwidth():
    """Test the normal-approximation half-width"""
    assert wald_halfwidth(50, 100) == pytest.approx(0.0979982, abs=1e-6)
    assert wald_halfwidth(0, 10) == 0.0
    with pytest.raises(StructuralError):
        wald_halfwidth(0, 0)


def test_wilson_interval():
    """Test Wilson score intervals"""
    low, high = wilson_interval(50, 100)
    assert low == pytest.approx(0.4038, abs=1e-4)
    assert high == pytest.approx(0.5962, abs=1e-4)
    low, high = wilson_interval(0, 10)
    assert low == pytest.approx(0.0, abs=1e-12)
    assert high == pytest.approx(0.2775, abs=1e-4)


def test_record_sink_round_trip(q8, tmp_path):
    """Test records written as JSON lines read back unchanged"""
    path = tmp_path / "records.jsonl"
    with RecordSink(str(path)) as sink:
        _, records = run_exhaustive(q8, sink=sink)
    assert sink.written == 32
    assert len(path.read_text().splitlines()) == 32
    assert read_records(str(path)) == records


def test_summary_csv(q8, tmp_path):
    """Test the summary CSV columns"""
    summary, _ = run_exhaustive(q8)
    path = tmp_path / "summary.csv"
    write_summary_csv([summary], str(path))
    header, row = path.read_text().splitlines()
    assert header == "group,n,m,total,exceptional,proportion,ci_halfwidth,bound_log2,vacuous,satisfied"
    assert row.startswith("dic:C4:y=2,8,2,32,")


def test_trend_frame(q8, dic_c6, config):
    """Test the trend table is sorted by n"""
    frame = run_trend([dic_c6, q8], trials=4, seed=0, config=config)
    assert frame["n"].tolist() == [8, 12]
    assert frame["kind"].tolist() == ["q8e", "generic"]
    assert {"group", "proportion", "ci_halfwidth", "ci_low", "ci_high"} <= set(frame.columns)
    assert (frame["trials"] == 4).all()
    with pytest.raises(StructuralError):
        run_trend([], trials=4, seed=0)


def test_record_validation():
    """Test a record's verdict must match its orders"""
    with pytest.raises(ValidationError):
        CensusRecord(
            group="dic:C4:y=2", set_hex="00", directed=False,
            aut_order=64, b_order=64, verdict=Verdict.PROPER_SUPERGROUP, elapsed=0.0,
        )


def test_summary_validation():
    """Test summary counts must be consistent"""
    with pytest.raises(ValidationError):
        CensusSummary(
            group="dic:C4:y=2", n=8, m=2, mode=CensusMode.EXHAUSTIVE, directed=False,
            total=3, exceptional=5, proportion=5 / 3,
        )
    with pytest.raises(ValidationError):
        CensusSummary(
            group="dic:C4:y=2", n=8, m=2, mode=CensusMode.EXHAUSTIVE, directed=False,
            total=4, exceptional=1, proportion=0.5,
        )
