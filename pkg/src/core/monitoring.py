"""Monitoring module for census runs."""
from typing import Optional
import time

from prometheus_client import CollectorRegistry, Counter, Histogram, Info, write_to_textfile

REGISTRY = CollectorRegistry()

# Classification metrics
CLASSIFICATIONS = Counter(
    'dicyclic_census_classifications_total',
    'Total number of connection sets classified',
    ['verdict', 'directed'],
    registry=REGISTRY
)

CLASSIFICATION_TIME = Histogram(
    'dicyclic_census_classification_seconds',
    'Time spent computing one automorphism group and verdict',
    buckets=(0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0),
    registry=REGISTRY
)

# Run metrics
RUNS = Counter(
    'dicyclic_census_runs_total',
    'Total number of census runs started',
    ['mode'],
    registry=REGISTRY
)

# System info
SYSTEM_INFO = Info('dicyclic_census', 'Census tooling information', registry=REGISTRY)


def track_classification(verdict: str, directed: bool, seconds: float):
    """Track one classified set."""
    CLASSIFICATIONS.labels(
        verdict=verdict,
        directed=str(directed).lower()
    ).inc()
    CLASSIFICATION_TIME.observe(seconds)


def track_run(mode: str):
    """Track a census run."""
    RUNS.labels(mode=mode).inc()


def init_metrics(app_version: str):
    """Initialize system metrics."""
    SYSTEM_INFO.info({
        'version': app_version,
        'start_time': time.strftime('%Y-%m-%d %H:%M:%S')
    })


def write_metrics(path: Optional[str]):
    """Write the registry in Prometheus text format; no-op without a path."""
    if path:
        write_to_textfile(path, REGISTRY)
