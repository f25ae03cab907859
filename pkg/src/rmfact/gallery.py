"""Small built-in systems with known structure, shared by the demos,
the command-line sample data, and the test oracles."""

from __future__ import annotations

import numpy as np

from .dss import DescriptorSystem, make_dss


def stable_rank2_continuous() -> DescriptorSystem:
    """Continuous 3x3 rational matrix of normal rank 2.

    Stable poles {-1, -1, -2, -2}, transmission zeros {1, 2} plus one
    infinite zero. G(0) = [[-1/2, 0, 1/2], [0, -2, -2], [-1/2, -1, -1/2]].
    The third column equals the second minus the first, which is what
    drops the rank.
    """
    A = np.array(
        [
            [-2.0, 0.0, 0.0, 0.0],
            [0.0, -2.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 1.0],
            [0.0, 0.0, 0.0, -1.0],
        ]
    )
    B = np.array(
        [
            [-3.0, -2.0, 1.0],
            [-3.0, 2.0, 5.0],
            [0.0, 1.0, 1.0],
            [0.0, -3.0, -3.0],
        ]
    )
    C = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
        ]
    )
    D = np.array(
        [
            [1.0, 1.0, 0.0],
            [0.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
        ]
    )
    return make_dss(A, None, B, C, D, "continuous")


def polynomial_rank2_discrete() -> DescriptorSystem:
    """Discrete 3x3 polynomial matrix of normal rank 2.

    McMillan degree 2 with both poles at infinity and a single zero at
    1. G(2) = [[7, 24, 6], [2, 7, 2], [4, 14, 4]]. Realized with a
    nilpotent E of order 4; det(A - lambda*E) is constant, so every
    finite point is a regular evaluation point.
    """
    E = np.array(
        [
            [0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )
    A = np.array(
        [
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 1.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    B = np.array(
        [
            [1.0, 4.0, 2.0],
            [0.0, 0.0, 0.0],
            [0.0, -1.0, -2.0],
            [0.0, 0.0, 0.0],
        ]
    )
    C = np.array(
        [
            [0.0, 1.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    D = np.array(
        [
            [1.0, 2.0, -2.0],
            [0.0, -1.0, -2.0],
            [0.0, 0.0, 0.0],
        ]
    )
    return make_dss(A, E, B, C, D, "discrete")
