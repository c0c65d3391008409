"""Small built-in contexts and random context generators."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .context import FormalContext, parse_cxt

WATER_ATTRIBUTES = (
    "can move around",
    "has limbs",
    "lives in water",
    "lives on land",
    "needs chlorophyll",
    "needs water",
    "one seed leaf",
    "suckles its offspring",
    "two seed leaves",
)

WATER_OBJECTS = ("Bean", "Bream", "Dog", "Frog", "Leech", "Maize", "Reed", "Spike-weed")


def water() -> FormalContext:
    """The living beings and water context (8 objects, 9 attributes)."""
    text = resources.files(__package__).joinpath("data/water.cxt").read_text(encoding="utf-8")
    return parse_cxt(text)


def _from_strings(objects, attributes, rows) -> FormalContext:
    incidence = [(g, a) for g, row in enumerate(rows) for a, ch in enumerate(row) if ch in "xX"]
    return FormalContext(objects, attributes, incidence)


def split_components() -> FormalContext:
    """Context whose pq-cores are not closed under meets/joins.

    Two connected blocks: ``a*``/``c1`` and ``b*``.
    """
    attributes = ["a1", "a2", "a3", "a4", "a5", "b1", "b2", "b3", "b4", "b5", "c1"]
    objects = ["a1", "a2", "b1", "b2", "b3", "c1"]
    rows = [
        "xxxxx.....x",
        "xxx........",
        ".....xxx...",
        ".....xx.x..",
        ".....xx..x.",
        "...xx......",
    ]
    return _from_strings(objects, attributes, rows)


def staircase(n: int) -> FormalContext:
    """Interordinal-style staircase: ``n`` objects, ``n + 1`` attributes.

    Object ``i`` (1-based) has attributes ``i, i+1, i+2`` clipped to the
    attribute range, so the last object has only two.  Its (3,2)-core is empty
    and is reached by a cascade of single deletions.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rows = []
    for i in range(n):
        mask = 0
        for a in range(i, min(i + 3, n + 1)):
            mask |= 1 << a
        rows.append(mask)
    return FormalContext.from_rows(
        [f"g{i + 1}" for i in range(n)], [f"m{j + 1}" for j in range(n + 1)], rows
    )


def random_context(
    n_objects: int,
    n_attributes: int,
    density: float = 0.5,
    rng: np.random.Generator | int | None = None,
) -> FormalContext:
    """Bernoulli(density) incidence."""
    rng = np.random.default_rng(rng)
    arr = rng.random((n_objects, n_attributes)) < density
    return FormalContext.from_array(arr)
