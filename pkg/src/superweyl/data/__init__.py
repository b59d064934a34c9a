"""Bundled manifold spec files."""
