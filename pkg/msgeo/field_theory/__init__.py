"""
First-order classical field theory in jet coordinates.
"""
