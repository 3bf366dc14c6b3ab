"""Deterministic derivation of independent random streams.

Experiments key every Monte-Carlo trial by (master seed, context labels) so
that parallel and serial execution draw identical randomness regardless of
scheduling order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["seed_derive"]


def seed_derive(master_seed: int, labels=()) -> np.random.Generator:
    """Generator for the stream identified by a master seed plus label tuple.

    Distinct label tuples give statistically independent streams; the empty
    tuple gives the master stream itself.
    """
    entropy = [int(master_seed), *(int(x) for x in labels)]
    return np.random.default_rng(np.random.SeedSequence(entropy))
