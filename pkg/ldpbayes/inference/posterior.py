"""Log posterior on the sampler's unconstrained space."""

import jax
import jax.numpy as jnp
import numpy as np
from jax.flatten_util import ravel_pytree
from numpyro import handlers
from numpyro.infer.util import initialize_model

from ldpbayes.inference.models import UnconstrainedPoint
from ldpbayes.inference.priors import CORR_SUFFIX, SCALE_SUFFIX
from ldpbayes.inference.transforms import transform_covariance, transform_site
from ldpbayes.utils.errors import InvalidParameterError


def _latent_supports(program, data, seed):
    trace = handlers.trace(handlers.seed(program, jax.random.PRNGKey(seed))).get_trace(data)
    return {
        name: site["fn"].support
        for name, site in trace.items()
        if site["type"] == "sample" and not site["is_observed"]
    }


class PosteriorDensity:
    """log prior + log likelihood + log|J| of a model conditioned on `data`.

    Parameters are flattened in the order numpyro's unconstraining transforms
    produce them. The value and gradient function is jit-compiled once and
    never raises; an invalid point evaluates to a non-finite value.
    """

    def __init__(self, model, data, seed=0):
        self.model = model
        self.data = data
        info = initialize_model(
            jax.random.PRNGKey(seed),
            model.program,
            model_args=(data,),
            dynamic_args=False,
        )
        self._potential = info.potential_fn
        prototype = info.param_info.z
        self.initial, self._unravel = ravel_pytree(prototype)
        self.dim = self.initial.shape[0]
        self.supports = _latent_supports(model.program, data, seed)
        self.covariances = tuple(
            name[: -len(SCALE_SUFFIX)] for name in prototype if name.endswith(SCALE_SUFFIX)
        )
        self._value_and_grad = jax.jit(jax.value_and_grad(self._log_density))

    def _log_density(self, values):
        return -self._potential(self._unravel(values))

    def _check(self, values):
        values = jnp.asarray(values, dtype=float)
        if values.shape != (self.dim,):
            raise InvalidParameterError(f"expected {self.dim} unconstrained values, got {values.shape}")
        return values

    def __call__(self, values):
        value, grad = self._value_and_grad(self._check(values))
        return float(value), np.asarray(grad)

    def constrain(self, values):
        """Constrained values of every sampled site, plus each covariance rebuilt from its scales and correlation."""
        unconstrained = self._unravel(self._check(values))
        out = {
            name: np.asarray(transform_site(self.supports[name], v)[0])
            for name, v in unconstrained.items()
        }
        for name in self.covariances:
            log_tau = unconstrained[f"{name}{SCALE_SUFFIX}"]
            pieces = [unconstrained.get(f"{name}{CORR_SUFFIX}", jnp.zeros(0)), log_tau]
            Sigma, _ = transform_covariance(jnp.concatenate(pieces), len(log_tau))
            out[name] = np.asarray(Sigma)
        return out

    def point(self, values):
        """An UnconstrainedPoint carrying log|J| of the map onto the sampled sites."""
        unconstrained = self._unravel(self._check(values))
        log_jacobian = sum(
            float(transform_site(self.supports[name], v)[1]) for name, v in unconstrained.items()
        )
        return UnconstrainedPoint(np.asarray(values, dtype=float), log_jacobian)


def log_posterior(model, point, data):
    """(value, gradient) of the unconstrained log posterior at `point`."""
    density = PosteriorDensity(model, data)
    values = point.values if isinstance(point, UnconstrainedPoint) else point
    return density(values)
