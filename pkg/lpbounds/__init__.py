"""
lpbounds - Lp-norm inequalities for log-concave densities

Computes Lp-norms, moment norms and Renyi/differential entropies of log-concave
densities and numerically certifies the inequalities that relate them.
"""

from lpbounds.config import settings

__version__ = settings.app_version
