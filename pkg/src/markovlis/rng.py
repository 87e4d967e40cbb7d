"""Counter-based random streams.

Every random quantity in the package is drawn from a Philox generator
keyed by ``(seed, stream_id)``.  Philox is counter-based, so distinct keys
give statistically independent streams and stream ``t`` can be recreated
at any time without generating streams ``0..t-1`` first.  Experiments give
trial ``t`` the stream id ``t``, which makes every trial reproducible
independently of batching, execution order, or thread count.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Generator for the (seed, stream_id) stream; same key, same draws."""
    key = ((int(seed) & _MASK64) << 64) | (int(stream_id) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))
