"""
Core utilities and configuration for SchurLab.
"""
