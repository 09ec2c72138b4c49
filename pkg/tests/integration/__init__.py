"""Integration tests for trade manager."""
