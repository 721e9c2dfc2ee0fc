"""Exact combinatorics for Kirillov-Reshetikhin crystals and box-ball style
soliton cellular automata: crystal graphs, the combinatorial R-matrix and
energy, time evolutions, rigged configurations, and the KKR bijection."""

__version__ = "0.1.0"
