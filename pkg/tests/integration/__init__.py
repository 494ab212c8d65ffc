"""
Integration tests for training and ensembles
"""
