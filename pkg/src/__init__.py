from .batch import FrictionBatch, run_command
from .config import RunConfig, load_run_config

__version__ = "0.1.0"

__all__ = [
    "FrictionBatch",
    "run_command",
    "RunConfig",
    "load_run_config",
]
