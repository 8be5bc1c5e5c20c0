"""Convex-hull-area statistical depth for sampled curves.

The depth of a curve against a reference sample is the expected ratio of the
convex-hull area of a few random curve graphs to the area after adding the
query's graph.  Low depth marks atypical curves, which makes the score a
direct anomaly detector for functional data.

Quick start::

    from hulldepth import GenSpec, DepthConfig, generate, depth_report

    batch = generate(GenSpec(kind="sinusoid", n=100, p=100, seed=7))
    report = depth_report(batch, batch, DepthConfig(J=2, K=500, seed=1))
    print(report.ranking[:5])   # five most atypical curve ids
"""

from .curves import (
    CsvFormatError,
    CurveBatch,
    ExtrapolationError,
    MeshStats,
    SampledCurve,
    evaluate_linear,
    graph_vertices,
    mesh_stats,
    read_csv,
    write_csv,
)
from .depth import (
    DepthConfig,
    DepthReport,
    DiscreteCurveDistribution,
    EnumerationBudgetError,
    ach_ratio,
    averaged_exact_depth,
    depth_report,
    exact_depth,
    integrated_baseline_depth,
    mc_depth,
    population_depth,
)
from .evaluation import (
    BenchmarkResult,
    Ranking,
    detection_bench,
    kendall_tau_distance,
    portion_detected,
    robustness_bench,
)
from .geometry import HullPolygon, convex_hull, hull_area, joint_hull_area, points_hull_area
from .synthdata import (
    ANOMALY_KINDS,
    AnomalySpec,
    GenSpec,
    gen_gbm,
    gen_sinusoid,
    generate,
    inject,
    read_labels_csv,
    reference_queries,
    write_labels_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ANOMALY_KINDS",
    "AnomalySpec",
    "BenchmarkResult",
    "CsvFormatError",
    "CurveBatch",
    "DepthConfig",
    "DepthReport",
    "DiscreteCurveDistribution",
    "EnumerationBudgetError",
    "ExtrapolationError",
    "GenSpec",
    "HullPolygon",
    "MeshStats",
    "Ranking",
    "SampledCurve",
    "ach_ratio",
    "averaged_exact_depth",
    "convex_hull",
    "depth_report",
    "detection_bench",
    "evaluate_linear",
    "exact_depth",
    "gen_gbm",
    "gen_sinusoid",
    "generate",
    "graph_vertices",
    "hull_area",
    "inject",
    "integrated_baseline_depth",
    "joint_hull_area",
    "kendall_tau_distance",
    "mc_depth",
    "mesh_stats",
    "points_hull_area",
    "population_depth",
    "portion_detected",
    "read_csv",
    "read_labels_csv",
    "reference_queries",
    "robustness_bench",
    "write_csv",
    "write_labels_csv",
]
