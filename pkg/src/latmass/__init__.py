"""Exact masses of unimodular lattices organised by root system."""

__version__ = "0.1.0"
