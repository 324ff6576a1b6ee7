"""Shared hypothesis configuration and small builders for the tests."""

from __future__ import annotations

import numpy as np
from hypothesis import HealthCheck, settings, strategies as st

from renyibounds import FiniteMeasure

settings.register_profile(
    "ci",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def measure_from_weights(weights) -> FiniteMeasure:
    w = np.asarray(weights, dtype=float)
    labels = tuple(str(i) for i in range(w.size))
    return FiniteMeasure.from_probs(labels, w / w.sum())


@st.composite
def finite_measures(draw, min_dim: int = 2, max_dim: int = 6, allow_zero: bool = False):
    dim = draw(st.integers(min_dim, max_dim))
    low = 0 if allow_zero else 1
    weights = draw(
        st.lists(st.integers(low, 1000), min_size=dim, max_size=dim).filter(
            lambda ws: sum(ws) > 0
        )
    )
    return measure_from_weights(weights)


@st.composite
def payoff_values(draw, dim: int):
    vals = draw(
        st.lists(
            st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False),
            min_size=dim,
            max_size=dim,
        )
    )
    return np.asarray(vals)
