"""One-level density of low-lying zeros of quadratic Dirichlet L-functions."""

from ._core import (
    AccuracyError,
    ConfigError,
    DataQualityError,
    DomainError,
    QdlError,
    ResourceError,
    UnsupportedError,
    __version__,
    char_average,
    empirical,
    expand,
    find_zeros,
    katz_sarnak,
    kronecker,
    predict,
    set_threads,
    verify,
    verify_names,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
