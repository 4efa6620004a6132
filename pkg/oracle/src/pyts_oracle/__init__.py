"""Runtime ground-truth oracle for class corpora."""

from .runner import run_oracle

__all__ = ["run_oracle"]
__version__ = "0.1.0"
