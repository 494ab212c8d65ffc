"""
Test package for tvpinn
"""
