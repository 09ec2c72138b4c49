"""Permutation groups and automorphism search."""
