"""Simulation side: draw client records and run each client's mechanism once."""

import logging

import numpy as np

from ldpbayes.protocol.models import ClientRecords, CollectionRun
from ldpbayes.utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)

ACCEPTS = {
    "scalar": ("laplace", "gaussian", "noiseless"),
    "bit": ("rr", "noiseless"),
    "category": ("oue", "noiseless"),
    "labeled": ("input", "statistic", "noiseless"),
}


def generate_data(model, params, N, rng):
    """N iid records from the model's generative process, clipped as clients clip them."""
    if N == 0:
        if model.payload == "labeled":
            return ClientRecords("labeled", np.zeros((0, model.d)), np.zeros(0))
        return ClientRecords(model.payload, np.zeros(0), d=getattr(model, "d", None))

    values = model.clip(model.simulate(params, N, rng))
    if model.payload == "labeled":
        x, y = values
        return ClientRecords("labeled", x, y)
    return ClientRecords(model.payload, np.asarray(values), d=getattr(model, "d", None))


def collect(records, mechanism, rng, budget=None):
    """Each client perturbs its own record exactly once with its own generator."""
    if mechanism.kind not in ACCEPTS[records.kind]:
        raise InvalidParameterError(
            f"a {mechanism.kind} mechanism cannot release {records.kind} payloads"
        )

    N = len(records)
    seeds = rng.integers(2**63, size=N, dtype=np.int64)
    reports, labels = [], []
    invocations = 0
    for i in range(N):
        out = mechanism.perturb(records.payload(i), np.random.default_rng(seeds[i]))
        invocations += 1
        if records.kind == "labeled" and isinstance(out, tuple):
            reports.append(np.asarray(out[0], dtype=float))
            labels.append(out[1])
        else:
            reports.append(out)

    if records.kind == "labeled":
        width = records.values.shape[1] if mechanism.kind != "statistic" else len(mechanism.noise_std)
        report_array = np.asarray(reports, dtype=float).reshape(N, width)
    else:
        report_array = np.asarray(reports)
    label_array = np.asarray(labels, dtype=float) if labels else None
    logger.debug("Collected %d %s reports", N, mechanism.kind)
    return CollectionRun(mechanism, budget, report_array, label_array, seeds, invocations)
