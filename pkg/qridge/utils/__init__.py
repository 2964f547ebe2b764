"""
Utilities package: logging configuration and error types.
"""
