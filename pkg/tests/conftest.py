import random
from functools import lru_cache

import pytest

import oracles
from genplus.homology import GroupModel
from genplus.matrix import MatrixR
from genplus.parsing import parse_group
from genplus.rings import QQ, ZI, ZZ, GaussianInteger, mod

SNF_RINGS = {"Z": ZZ, "Z/5": mod(5), "Q": QQ, "Z[i]": ZI}


def random_matrix(rng: random.Random, ring, max_dim: int = 8, bound: int = 50) -> MatrixR:
    rows, cols = rng.randint(1, max_dim), rng.randint(1, max_dim)

    def entry():
        if rng.random() < 0.25:
            return 0
        if ring == ZI:
            return GaussianInteger(rng.randint(-bound, bound), rng.randint(-bound, bound))
        return rng.randint(-bound, bound)

    return MatrixR.from_rows(ring, [[entry() for _ in range(cols)] for _ in range(rows)], cols)


@lru_cache(maxsize=None)
def group_model(text: str) -> GroupModel:
    return GroupModel.realize(parse_group(text))


@lru_cache(maxsize=None)
def bar_Z(name: str):
    return oracles.bar_homology_Z(_by_name(name))


@lru_cache(maxsize=None)
def bar_mod_p(name: str, p: int):
    return oracles.bar_homology_mod_p(_by_name(name), p)


def _by_name(name: str) -> oracles.PermGroup:
    return next(G for G in oracles.TEST_GROUPS if G.name == name)


@pytest.fixture
def rng():
    return random.Random(20261016)
