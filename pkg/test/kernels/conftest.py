import numpy as np
import pytest

LENGTH = 20


@pytest.fixture(scope='function')
def bitcorr():
    """Compiled sidelobe kernel, skipped when the extension is not built"""
    yield pytest.importorskip('zcaq._bitcorr')


@pytest.fixture(scope='function')
def codes():
    """Packed length-20 binary sequences, bit j set for -1"""
    rng = np.random.default_rng(7)
    yield rng.integers(0, 1 << LENGTH, 500, dtype=np.uint64)


@pytest.fixture(scope='function')
def direct(codes):
    """rho(1 .. L-1) of the packed sequences, computed from +-1 entries"""
    bits = (codes[:, None] >> np.arange(LENGTH, dtype=np.uint64)) & np.uint64(1)
    x = 1 - 2 * bits.astype(np.int64)
    yield np.stack([np.sum(x[:, :LENGTH - tau] * x[:, tau:], axis=1) for tau in range(1, LENGTH)], axis=1)
