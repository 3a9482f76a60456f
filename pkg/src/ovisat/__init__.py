"""Weekly mosquito oviposition modeling from satellite environmental series.

The package turns dated satellite-index extracts and per-house ovitrap
egg counts into an aligned weekly design matrix, fits six regressors
behind one contract, and reports holdout and walk-forward quality
measures, all reproducibly from a single config file.
"""

__version__ = "0.1.0"

from . import dataset, evaluation, features, models, pca, splits
from .errors import ConfigError, DataError, ModelError, OvisatError

__all__ = [
    "ConfigError",
    "DataError",
    "ModelError",
    "OvisatError",
    "dataset",
    "evaluation",
    "features",
    "models",
    "pca",
    "splits",
    "__version__",
]
