"""
Desk-scale quantum-circuit simulator for ridge-regression prediction and
regularization-hyperparameter selection, checked against an exact SVD oracle.
"""
__version__ = "0.1.0"
