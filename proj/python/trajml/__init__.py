"""AutoML for windowed trajectory action classification."""

from ._trajml import (
    Bundle,
    Dataset,
    TrajmlError,
    class_weights,
    evaluate,
    fit,
    meta_features,
    synth_generate,
)

__all__ = [
    "Bundle",
    "Dataset",
    "TrajmlError",
    "class_weights",
    "evaluate",
    "fit",
    "meta_features",
    "synth_generate",
]
