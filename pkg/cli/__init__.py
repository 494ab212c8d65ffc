"""
Command layer: fit, simulate and verify, plus result-bundle persistence
"""
