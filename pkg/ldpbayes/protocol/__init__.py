from ldpbayes.protocol.aggregator import (
    observations,
    oue_point_estimate,
    rr_mean_estimate,
    simplex_project,
    summarize,
)
from ldpbayes.protocol.clients import collect, generate_data
from ldpbayes.protocol.io import read_records, read_run, write_run
from ldpbayes.protocol.models import ClientRecords, CollectionRun, SGDConfig, SGDResult
from ldpbayes.protocol.sgd import ldp_sgd

__all__ = [
    "ClientRecords",
    "CollectionRun",
    "SGDConfig",
    "SGDResult",
    "collect",
    "generate_data",
    "ldp_sgd",
    "observations",
    "oue_point_estimate",
    "read_records",
    "read_run",
    "rr_mean_estimate",
    "simplex_project",
    "summarize",
    "write_run",
]
