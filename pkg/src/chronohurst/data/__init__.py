"""Bundled monthly fixtures."""
