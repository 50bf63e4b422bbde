"""
Exact linear and multilinear algebra over the rationals.
"""
