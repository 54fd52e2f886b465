"""Counter-based random substreams keyed by (seed, replication, label).

Each replication gets its own Philox key derived from the seed and the
replication index; each random sequence inside a replication gets its own
counter block through the top counter word. Results therefore do not depend
on how replications are split across chunks or threads.
"""

import numpy as np

ARRIVALS = 0
EXP_MARKS = 1
UNIF_MARKS = 2
V_MARKS = 3
TIMES = 4
GAUSS = 5


def replication_key(seed, rep):
    return np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(int(rep),)).generate_state(2, np.uint64)


def substream(seed, rep, label, key=None):
    """Generator for sequence ``label`` of replication ``rep``."""
    if key is None:
        key = replication_key(seed, rep)
    bitgen = np.random.Philox(key=key, counter=np.array([0, 0, 0, label], dtype=np.uint64))
    return np.random.Generator(bitgen)


def open_unit(gen, size):
    """Uniform draws on (0, 1]."""
    return 1.0 - gen.random(size)
