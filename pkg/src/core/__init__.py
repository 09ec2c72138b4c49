"""Core group and graph components."""
