"""Reference chunk-translation server for the Bahnaric-Vietnamese pipeline."""

__version__ = "0.1.0"
