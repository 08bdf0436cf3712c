"""Exact workbench for Landau-Ginzburg state spaces and Virasoro operators."""

__version__ = "0.1.0"
