import numpy as np
import pytest

from qscond import GvTangentParams, QsParams


def make_qs(n, rng):
    return QsParams(
        p=rng.standard_normal(n - 1),
        a=rng.standard_normal(max(n - 2, 0)),
        q=rng.standard_normal(n - 1),
        d=rng.standard_normal(n),
        g=rng.standard_normal(n - 1),
        b=rng.standard_normal(max(n - 2, 0)),
        h=rng.standard_normal(n - 1),
    )


def make_gv(n, rng):
    return GvTangentParams(
        l=rng.standard_normal(n - 2),
        v=rng.standard_normal(n - 1),
        d=rng.standard_normal(n),
        w=rng.standard_normal(n - 1),
        u=rng.standard_normal(n - 2),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
