"""Drift detection for multi-label data streams.

The package provides an unsupervised label-dependency drift detector, the
classic supervised baselines DDM and EDDM, a streaming classifier chain,
synthetic drift-stream generation, dataset file I/O, multi-label metrics,
and a prequential evaluation harness with a CLI front end.
"""

from .baselines import DDM, EDDM, exact_match
from .chain import IncrementalClassifierChain
from .detector import LD3, DriftSignal, LabelDependencyDriftDetector, sigma_anomaly_count
from .evaluation import (
    MetricReport,
    StepTrace,
    prequential_run,
    write_json_report,
    write_segment_rows,
)
from .metrics import (
    RankTable,
    average_ranks,
    example_accuracy,
    example_f1,
    hamming_score,
    micro_f1,
    nemenyi_critical_distance,
    per_instance_accuracy,
    segment_series,
    tied_average_ranks,
)
from .rankfusion import (
    FUSION_METHODS,
    ConvergenceWarning,
    GlobalRanking,
    borda_fusion,
    condorcet_fusion,
    cooccurrence_matrix,
    local_rankings,
    mc4_fusion,
    reciprocal_fusion,
    ws_coefficient,
)
from .streams import (
    DatasetMeta,
    DriftStreamSpec,
    Instance,
    StreamFormatError,
    generate_synthetic,
    read_dataset,
    sigmoid_mix_probability,
    write_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "DDM",
    "EDDM",
    "exact_match",
    "IncrementalClassifierChain",
    "LD3",
    "LabelDependencyDriftDetector",
    "DriftSignal",
    "sigma_anomaly_count",
    "MetricReport",
    "StepTrace",
    "prequential_run",
    "write_json_report",
    "write_segment_rows",
    "RankTable",
    "average_ranks",
    "example_accuracy",
    "example_f1",
    "hamming_score",
    "micro_f1",
    "nemenyi_critical_distance",
    "per_instance_accuracy",
    "segment_series",
    "tied_average_ranks",
    "FUSION_METHODS",
    "ConvergenceWarning",
    "GlobalRanking",
    "borda_fusion",
    "condorcet_fusion",
    "cooccurrence_matrix",
    "local_rankings",
    "mc4_fusion",
    "reciprocal_fusion",
    "ws_coefficient",
    "DatasetMeta",
    "DriftStreamSpec",
    "Instance",
    "StreamFormatError",
    "generate_synthetic",
    "read_dataset",
    "sigmoid_mix_probability",
    "write_dataset",
    "__version__",
]
