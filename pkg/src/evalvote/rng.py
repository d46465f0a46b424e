"""Deterministic random sources with independently seeded substreams.

Every stochastic operation in this package draws from a
:class:`SeededRandomSource`. A source is a pure value: the pair
``(master_seed, stream_index)`` fully determines the draw sequence, so
the same source always regenerates the same data. Parallel work never
shares a stream; each task derives its own substream index instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ParameterError

_MAX_SEED = 2**64


@dataclass(frozen=True)
class SeededRandomSource:
    """A reproducible random stream keyed by (master_seed, stream_index).

    Substreams with distinct indices are statistically independent: the
    index enters the underlying generator through ``SeedSequence``'s
    spawn-key mixing, not by offsetting into a single shared stream.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < _MAX_SEED:
            raise ParameterError(
                f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}"
            )
        if int(self.stream_index) < 0:
            raise ParameterError(
                f"stream_index must be non-negative, got {self.stream_index}"
            )

    def generator(self) -> np.random.Generator:
        """Return a fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence(
            entropy=int(self.master_seed), spawn_key=(int(self.stream_index),)
        )
        return np.random.Generator(np.random.PCG64(seq))

    def substream(self, index: int) -> "SeededRandomSource":
        """Derive the independent substream with the given index."""
        return SeededRandomSource(self.master_seed, index)


RandomState = Union[SeededRandomSource, np.random.Generator]


def as_generator(rng: RandomState) -> np.random.Generator:
    """Coerce a source or an already-built generator to a generator.

    Passing a :class:`SeededRandomSource` restarts its stream, which makes
    callers pure functions of the source; passing a ``numpy`` generator
    continues consuming it, which lets one stream feed several draws in
    sequence (parameter sampling followed by entry sampling, for example).
    """
    if isinstance(rng, SeededRandomSource):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise ParameterError(
        f"expected SeededRandomSource or numpy Generator, got {type(rng).__name__}"
    )
