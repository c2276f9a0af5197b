"""Algebra package initialization."""
