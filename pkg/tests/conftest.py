"""Shared fixtures.

The expensive physics runs (convergence ladders, long conservation runs,
the runup sweep) live here as session-scoped fixtures so the acceptance
tests and the cheaper property tests can share one computation.
"""

import numpy as np
import pytest

from sgnfem import benchmarks


@pytest.fixture(scope="session")
def p1_table():
    return benchmarks.convergence_study("P1", n_values=(80, 160, 320, 640), norms=(0, 1, "inf"))


@pytest.fixture(scope="session")
def p2_table():
    return benchmarks.convergence_study("P2", n_values=(80, 160, 320, 640), norms=(0, 1, "inf"))


@pytest.fixture(scope="session")
def mixed_table():
    return benchmarks.convergence_study("P1", "P2", n_values=(80, 160, 320, 640), norms=(0,))


@pytest.fixture(scope="session")
def s3_table():
    return benchmarks.convergence_study(
        "S3", n_values=benchmarks.SPLINE_N_LADDER, norms=(0, 1, 2, "inf")
    )


@pytest.fixture(scope="session")
def energy_run():
    return benchmarks.energy_study(amplitude=0.2, dx=0.1, dt=0.01, t_end=50.0)


@pytest.fixture(scope="session")
def runup_sweeps():
    return benchmarks.runup_sweep(families=("P1", "S3"))


def finest_rate(table, norm, which):
    rates = table.rates(norm, which)
    return rates[-1]


def table_errors(table, norm, which):
    return np.asarray([table.errors[(norm, which)][i] for i in range(len(table.n_values))])
