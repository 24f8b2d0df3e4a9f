"""Failure-concept mining: extract and label failure scenarios from
corrective-maintenance text via TF-IDF and truncated SVD."""

__version__ = "0.1.0"
