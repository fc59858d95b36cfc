"""Python interface to the qmlkit simulator and learning routines."""

from ._core import (
    ConfigError,
    DomainError,
    classical_dft,
    dist_calc,
    expectation,
    grover_search,
    grover_state,
    inverse_dft,
    kmeans,
    kmedians,
    median_calc,
    minimize,
    mixed_density,
    phase_estimate,
    qft,
    qft_matrix,
    qnn_train,
    qpca,
    qsvm,
    run_cli,
    swap_test,
    variance,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "classical_dft",
    "dist_calc",
    "expectation",
    "grover_search",
    "grover_state",
    "inverse_dft",
    "kmeans",
    "kmedians",
    "median_calc",
    "minimize",
    "mixed_density",
    "phase_estimate",
    "qft",
    "qft_matrix",
    "qnn_train",
    "qpca",
    "qsvm",
    "run_cli",
    "swap_test",
    "variance",
]
