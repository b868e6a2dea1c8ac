"""No-U-Turn sampling of the noise-aware posteriors.

NUTS with dual-averaging step size and a diagonal mass matrix adapted in
numpyro's staged warmup windows. A transition whose energy error exceeds
1000 is marked divergent. Chains are vectorized in one process, so a run
is a pure function of (model, data, config).
"""

import logging

import jax
import numpy as np
from numpyro.infer import MCMC, NUTS, init_to_median

from ldpbayes.inference.chains import ChainSet
from ldpbayes.inference.models import SamplerConfig
from ldpbayes.utils.errors import SamplingFailureError

logger = logging.getLogger(__name__)

DIVERGENCE_WARNING_RATE = 0.10


class PosteriorSampler:
    """A compiled MCMC driver for one model; `run` may be called with new data of the same shape."""

    def __init__(self, model, config=None):
        self.model = model
        self.config = config or SamplerConfig()
        kernel = NUTS(
            model.program,
            target_accept_prob=self.config.target_accept,
            max_tree_depth=self.config.max_tree_depth,
            dense_mass=False,
            init_strategy=init_to_median,
        )
        self._mcmc = MCMC(
            kernel,
            num_warmup=self.config.num_warmup,
            num_samples=self.config.num_samples,
            num_chains=self.config.chains,
            chain_method="vectorized",
            progress_bar=False,
            jit_model_args=True,
        )

    def run(self, data, seed=None):
        seed = self.config.seed if seed is None else seed
        self._mcmc.run(jax.random.PRNGKey(seed), data, extra_fields=("diverging",))
        samples = self._mcmc.get_samples(group_by_chain=True)
        divergent = np.asarray(self._mcmc.get_extra_fields(group_by_chain=True)["diverging"])

        chainset = ChainSet.from_samples(
            {k: np.asarray(v) for k, v in samples.items()},
            self.model.sites,
            warmup_fraction=self.config.warmup_fraction,
            divergent=divergent,
        )
        rate = chainset.divergence_rate
        if rate >= 1.0:
            raise SamplingFailureError("every post-warmup transition diverged")
        if rate > DIVERGENCE_WARNING_RATE:
            message = f"{rate:.1%} of post-warmup transitions diverged"
            chainset.warnings.append(message)
            logger.warning(message)
        if hasattr(self.model, "clamp_rate"):
            clamped = self.model.clamp_rate(data, chainset)
            if clamped > 0:
                logger.debug("Surrogate clamped for %.2f%% of records", 100 * clamped)
        return chainset


def sample(model, data, config=None):
    """Draw from the posterior of `model` given the aggregator's `data`."""
    return PosteriorSampler(model, config).run(data)
