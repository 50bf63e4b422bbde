"""
Symbolic expressions over jet coordinates and differential forms with expression coefficients.
"""
