"""
Chern-Calabi Flow - Source Package

Pseudospectral tensor calculus on flat complex tori, the Chern-Calabi flow
integrators, and the identity verification suite.
"""

__version__ = "0.3.0"  # x-release-please-version
