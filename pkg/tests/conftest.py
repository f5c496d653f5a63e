from __future__ import annotations

import random
from fractions import Fraction

import pytest

from bratteli import (
    BratteliPrefix,
    MultiplicityMatrix,
    SimplexPoint,
    StochasticAffineMap,
    TriangularSpec,
    embed_triangular,
)
from bratteli.fixtures import fixture_diagram


def all_ones_spec(depth: int) -> TriangularSpec:
    return TriangularSpec(1, [(1,) * (n + 1) for n in range(depth)])


@pytest.fixture
def ones12() -> TriangularSpec:
    return all_ones_spec(12)


@pytest.fixture
def ex57a_right() -> BratteliPrefix:
    return fixture_diagram("ex57A-right")


@pytest.fixture
def ex57a_left() -> BratteliPrefix:
    return fixture_diagram("ex57A-left")


@pytest.fixture
def ex57b() -> BratteliPrefix:
    return fixture_diagram("ex57B")


def random_nondegenerate_matrix(rng: random.Random, rows: int, cols: int) -> MultiplicityMatrix:
    entries = [[rng.randrange(0, 4) for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        if all(e == 0 for e in entries[i]):
            entries[i][rng.randrange(cols)] = rng.randrange(1, 4)
    for j in range(cols):
        if all(entries[i][j] == 0 for i in range(rows)):
            entries[rng.randrange(rows)][j] = rng.randrange(1, 4)
    return MultiplicityMatrix(entries)


def random_unital_prefix(
    rng: random.Random, max_depth: int = 3, max_width: int = 4
) -> BratteliPrefix:
    depth = rng.randrange(2, max_depth + 1)
    widths = [rng.randrange(1, max_width + 1) for _ in range(depth)]
    levels = [[rng.randrange(1, 4) for _ in range(widths[0])]]
    matrices = []
    for n in range(depth - 1):
        mat = random_nondegenerate_matrix(rng, widths[n + 1], widths[n])
        matrices.append(mat)
        levels.append(list(mat.apply(levels[-1])))
    return BratteliPrefix(levels, matrices, unital=True)


def random_unital_step(rng: random.Random):
    cols = rng.randrange(1, 5)
    rows = rng.randrange(1, 6)
    mat = random_nondegenerate_matrix(rng, rows, cols)
    u_src = [rng.randrange(1, 6) for _ in range(cols)]
    u_dst = list(mat.apply(u_src))
    return mat, u_src, u_dst


def random_point(rng: random.Random, dim: int) -> SimplexPoint:
    weights = [Fraction(rng.randrange(0, 9), rng.randrange(1, 9)) for _ in range(dim)]
    if all(w == 0 for w in weights):
        weights[rng.randrange(dim)] = Fraction(1)
    return SimplexPoint.normalized(weights)


def random_stochastic_map(rng: random.Random, rows: int, cols: int) -> StochasticAffineMap:
    return StochasticAffineMap.from_columns([random_point(rng, rows) for _ in range(cols)])


def embed(spec: TriangularSpec, depth: int) -> BratteliPrefix:
    return embed_triangular(spec, depth)
