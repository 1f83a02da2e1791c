"""Verification engine for a dispersionless potential equation and its reductions."""
__version__ = "0.1.0"
