"""Built-in example data."""

from __future__ import annotations

import numpy as np

from .wishart import DataSet

# Head dimensions of 25 pairs of sons: length and breadth of the first son,
# then length and breadth of the second.  Stored as the scatter matrix of
# the centred observations.
FRETS_VARIABLES = ("L1", "B1", "L2", "B2")
FRETS_N = 25
FRETS_SCATTER = np.array(
    [
        [2287.04, 1268.84, 1671.88, 1106.68],
        [1268.84, 1304.64, 1231.48, 841.28],
        [1671.88, 1231.48, 2419.36, 1356.96],
        [1106.68, 841.28, 1356.96, 1080.56],
    ]
)


def frets_dataset() -> DataSet:
    """Scatter matrix of the heads data as a DataSet."""
    return DataSet(scatter=FRETS_SCATTER.copy(), n=FRETS_N)
