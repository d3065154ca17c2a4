"""A DataJoint `conftest.py` file for `pytest`.

Read more about `conftest.py` under:
    - https://docs.pytest.org/en/stable/fixture.html
    - https://docs.pytest.org/en/stable/writing_plugins.html
"""

from pathlib import Path

import datajoint as dj
import numpy as np
import pytest

from bec_entanglement.pipeline.optics import make_beam_splitter
from bec_entanglement.pipeline.projection import JointState


@pytest.fixture
def dj_config():
    if Path("./dj_local_conf.json").exists():
        dj.config.load("./dj_local_conf.json")

    dj.config["safemode"] = False
    dj.config["loglevel"] = "DEBUG"

    yield dj.config


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def balanced_bs():
    return make_beam_splitter(1 / np.sqrt(2))


@pytest.fixture
def vacuum_state():
    return JointState.from_amplitudes([[1.0]], n_max=2)


@pytest.fixture
def bell_state():
    """(|01⟩ + |10⟩)/√2"""
    return JointState.from_amplitudes([[0.0, 1.0], [1.0, 0.0]], n_max=2)


@pytest.fixture
def product_state(rng):
    """Factory of random a ⊗ b with up to two excitations per mode."""

    def make(n_max: int = 2) -> JointState:
        local_a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        local_b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        return JointState.from_amplitudes(np.outer(local_a, local_b), n_max=n_max)

    return make
