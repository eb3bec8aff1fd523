"""Random column generators shared by the property and acceptance tests."""

import numpy as np


def random_column(rng, max_m=50, missing=False, decimals=None):
    """A column of 2..max_m values from a randomly chosen shape."""
    m = int(rng.integers(2, max_m + 1))
    shape = rng.integers(0, 4)
    if shape == 0:
        col = rng.uniform(-5, 5, size=m)
    elif shape == 1:
        col = rng.exponential(2.0, size=m)
    elif shape == 2:
        col = rng.integers(0, 6, size=m).astype(float)   # heavy ties
    else:
        col = np.concatenate([rng.normal(0, 1, size=m - m // 3), rng.normal(8, 0.1, size=m // 3)])
    if decimals is not None:
        col = np.round(col, decimals)
    col = [float(v) for v in col]
    if missing and rng.random() < 0.3:
        for i in rng.choice(m, size=int(rng.integers(1, max(2, m // 4))), replace=False):
            col[i] = None
        if all(v is None for v in col):
            col[0] = 0.0
    return col


def random_case(rng, max_m=50, missing=False):
    col = random_column(rng, max_m, missing, decimals=int(rng.integers(1, 4)))
    s = int(rng.integers(1, 5))
    c = int(rng.integers(1, 6))
    k = int(rng.integers(1, 5))
    labels = [int(x) for x in rng.integers(1, s + 1, size=len(col))]
    return col, labels, s, c, k
