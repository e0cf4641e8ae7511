"""
hybtrot: classical simulation of hybrid deterministic/random Trotter
splitting on dense state vectors.
"""

__version__ = '0.1.0'
