"""Group-wise classification-complexity and fairness audit toolkit.

Thin re-export of the compiled core. All functions accept and return plain
Python types (lists, dicts, None for undefined values).
"""

from cfair._core import (
    DataError,
    apriori,
    audit_csv,
    classical_mds,
    compute_metric,
    compute_profile,
    enumerate_catalog,
    evaluate_rules,
    fairness_names,
    fairness_report,
    generate_dataset,
    learner_names,
    load_csv,
    metric_names,
    mine_rules,
    __version__,
)

__all__ = [
    "DataError",
    "apriori",
    "audit_csv",
    "classical_mds",
    "compute_metric",
    "compute_profile",
    "enumerate_catalog",
    "evaluate_rules",
    "fairness_names",
    "fairness_report",
    "generate_dataset",
    "learner_names",
    "load_csv",
    "metric_names",
    "mine_rules",
    "__version__",
]
