import numpy as np
import pytest

from ramsel import ChannelSet, LinkParams


def complex_gaussian(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_channel_set(rng, k_users=2, n_f=1, n_steps=1, n_modes=3, n_rx=2, n_tx=4):
    """Raw i.i.d. per-mode channel tensor, no geometry involved."""
    return ChannelSet(complex_gaussian(rng, k_users, n_f, n_steps, n_modes, n_rx, n_tx))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def two_user_params():
    return LinkParams(rho=10.0, noise_power=1.0, per_user_streams=(1, 1))
