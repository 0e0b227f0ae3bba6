"""Shared fixtures: canonical parameters and the two workhorse extension matrices."""

from __future__ import annotations

import numpy as np
import pytest

from radext.channels import ModelParams
from radext.extensions import ExtensionMatrix

# permutation swapping channels 0 and 1, identity on the rest
SWAP_01 = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])


@pytest.fixture(scope="session")
def monopole() -> ModelParams:
    return ModelParams()


@pytest.fixture(scope="session")
def identity_ext() -> ExtensionMatrix:
    return ExtensionMatrix(np.eye(4))


@pytest.fixture(scope="session")
def swap_ext() -> ExtensionMatrix:
    return ExtensionMatrix(SWAP_01)
