"""Domain-gated mixture-of-experts rumor classifier."""

from ._mdrd import (
    ConfigError,
    DimensionError,
    Error,
    FormatError,
    Model,
    bce_loss,
    classification_metrics,
    clean_text,
    fleiss_kappa,
    gradcheck,
    kappa_band,
    run_cli,
    synth,
    zscore,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "Error",
    "FormatError",
    "Model",
    "bce_loss",
    "classification_metrics",
    "clean_text",
    "fleiss_kappa",
    "gradcheck",
    "kappa_band",
    "run_cli",
    "synth",
    "zscore",
]
