"""
Unit tests for individual packages
"""
