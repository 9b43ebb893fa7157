import math

import numpy as np
import pytest
from hypothesis import strategies as st

from stripewalk import make_coin, make_hadamard


@pytest.fixture(scope="session")
def hadamard():
    return make_hadamard()


@pytest.fixture(scope="session")
def complex_coin():
    # Unitary with all-complex entries, abcd != 0.
    r = 1.0 / math.sqrt(2.0)
    return make_coin(r, 1j * r, 1j * r, r)


def unitary_coin_strategy():
    """Arbitrary U(2) coin from four angles (always exactly unitary)."""
    angle = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)

    def build(phases):
        g, p1, p2, theta = phases
        c, s = math.cos(theta), math.sin(theta)
        a = c * np.exp(1j * (g + p1))
        b = s * np.exp(1j * (g + p2))
        cc = -s * np.exp(1j * (g - p2))
        d = c * np.exp(1j * (g - p1))
        return make_coin(a, b, cc, d)

    return st.tuples(angle, angle, angle, angle).map(build)


def unit_spinor_strategy():
    angle = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)

    def build(args):
        theta, phi = args
        return np.array([math.cos(theta), math.sin(theta) * np.exp(1j * phi)])

    return st.tuples(angle, angle).map(build)
