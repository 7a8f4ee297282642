"""
Command-line tool for the Lp-norm inequality suite.
"""

from lpbounds.cli.main import app

__all__ = ["app"]
