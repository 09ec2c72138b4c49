"""Automorphism groups and censuses of Cayley graphs on generalised dicyclic groups."""
