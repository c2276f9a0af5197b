"""Finite Heyting algebras, their centrally supplemented extensions and hyper-MacNeille completions."""

__version__ = "0.1.0"
