"""
Pydantic models for run configuration and results
"""
