"""
Tests for lpbounds.
"""
