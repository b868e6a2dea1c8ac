import textwrap

import numpy as np
import pytest

from ldpbayes.inference import SamplerConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fast_sampler():
    """Enough draws for well-conditioned low-dimensional posteriors."""
    return SamplerConfig(chains=2, draws=600, warmup_fraction=0.5)


@pytest.fixture
def write_yaml(tmp_path):
    def write(text, name="experiment.yaml"):
        path = tmp_path / name
        path.write_text(textwrap.dedent(text).lstrip())
        return path

    return write


@pytest.fixture(autouse=True)
def thread_cap(monkeypatch):
    monkeypatch.setenv("LDP_BAYES_THREADS", "2")
