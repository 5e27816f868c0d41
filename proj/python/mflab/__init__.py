"""Python access to the mflab core: spectra, exact S_n laws, quasi-Bernoulli checks."""

from ._core import (
    BudgetError,
    MflabError,
    NumericalError,
    ValidationError,
    __version__,
    canonical_spec,
    chi,
    classify,
    dimension,
    exact_distribution,
    qb_constant,
    run_cli,
    sample_path,
    sigma2,
    support_dimension,
    tau,
    tau_empirical,
    zoo,
)

__all__ = [
    "BudgetError",
    "MflabError",
    "NumericalError",
    "ValidationError",
    "__version__",
    "canonical_spec",
    "chi",
    "classify",
    "dimension",
    "exact_distribution",
    "qb_constant",
    "run_cli",
    "sample_path",
    "sigma2",
    "support_dimension",
    "tau",
    "tau_empirical",
    "zoo",
]
