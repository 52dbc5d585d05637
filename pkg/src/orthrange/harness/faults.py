"""Deliberate corruption for testing that verification catches bugs."""
from __future__ import annotations

from contextlib import contextmanager

import numpy as np

from .. import ball_inheritance


@contextmanager
def flipped_routing_bit(position: int = 0):
    """Ball trees built inside the block get one root routing bit flipped.

    The flip happens on the symbol array before the rank index is built, so
    both backends see the same corrupt tree.
    """
    real = ball_inheritance.AlphabetRankIndex
    state = {"done": False}

    def corrupt(symbols, sigma=None, segment=None):
        if not state["done"] and sigma == 2 and len(symbols) > position:
            symbols = np.array(symbols, copy=True)
            symbols[position] ^= 1
            state["done"] = True
        return real(symbols, sigma, segment)

    ball_inheritance.AlphabetRankIndex = corrupt
    try:
        yield state
    finally:
        ball_inheritance.AlphabetRankIndex = real


FAULTS = {"routing_bit": flipped_routing_bit}
