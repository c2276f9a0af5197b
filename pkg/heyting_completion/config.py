"""
Configuration for size bounds, sampling and the worker pool.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Settings:
    """Tunable bounds shared by the algebra modules, the suite and the CLI."""

    max_points: int = 6
    max_carrier: int = 4096
    max_closed_sets: int = 4096
    frame_size_limit: int = 32
    frame_axiom_exhaustive_limit: int = 256
    closure_exhaustive_limit: int = 12
    regular_scan_limit: int = 10
    collapse_word_length: int = 2
    collapse_max_elements: int = 8
    sample_count: int = 256
    seed: int = 0
    random_count: int = 2
    random_points: int = 0  # 0: one more point than the exhaustive corpus
    workers: int = 1


# Global settings instance
DEFAULT_SETTINGS = Settings()
