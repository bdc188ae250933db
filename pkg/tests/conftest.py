"""Shared, session-cached operators; the dim=64 quantizers are the expensive part."""
import numpy as np
import pytest

from pomquant import (
    GeneratingOperator,
    QuantizerA,
    QuantizerWeyl,
    TruncationConfig,
    build_momentum,
    build_position,
)
from pomquant.measurement import make_rng

DIM = 64
BLOCK = DIM // 4


@pytest.fixture(scope="session")
def cfg():
    return TruncationConfig(DIM)


@pytest.fixture(scope="session")
def Q(cfg):
    return build_position(cfg)


@pytest.fixture(scope="session")
def P(cfg):
    return build_momentum(cfg)


@pytest.fixture(scope="session")
def weyl():
    return QuantizerWeyl(DIM)


GENERATORS = {
    "h0": lambda: GeneratingOperator.fock_projector(0, DIM),
    "h1": lambda: GeneratingOperator.fock_projector(1, DIM),
    "mix": lambda: GeneratingOperator.fock_diagonal([0.6, 0.4], DIM),
}


@pytest.fixture(scope="session")
def type_a():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = QuantizerA(GENERATORS[name]())
        return cache[name]

    return get


@pytest.fixture
def rng():
    return make_rng(20240917)


def blockdiff(a, b, k=BLOCK):
    return float(np.abs(np.asarray(a) - np.asarray(b))[:k, :k].max())
