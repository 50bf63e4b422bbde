"""
msgeo: exact multisymplectic linear algebra and first-order field-theory calculus.
"""

__version__ = "0.1.0"
