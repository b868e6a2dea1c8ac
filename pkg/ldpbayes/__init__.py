import ldpbayes.extensions  # noqa: F401  must run before any jax computation
from ldpbayes.app import create_cli, main

__all__ = ["create_cli", "main"]
