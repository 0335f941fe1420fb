"""
Configuration management for Spike Regions
"""
import os
from fractions import Fraction
from pathlib import Path
from typing import List, Tuple
from pydantic import BaseModel, Field
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

Box = List[Tuple[Fraction, Fraction]]


def parse_box(text: str) -> Box:
    """
    Parse "lo,hi x lo,hi x ..." into exact (lo, hi) pairs

    Args:
        text: e.g. "-1,1x-1,1" or "0,1"

    Returns:
        List of (lo, hi) per coordinate
    """
    sides = []
    for part in text.lower().split("x"):
        bounds = [piece.strip() for piece in part.split(",")]
        if len(bounds) != 2 or not all(bounds):
            raise ValueError(f"Box side '{part}' must look like lo,hi")
        lo, hi = (Fraction(value) for value in bounds)
        if not lo < hi:
            raise ValueError(f"Box side '{part}' is empty")
        sides.append((lo, hi))
    return sides


class Config(BaseModel):
    """Main configuration class for spike-regions runs"""

    # Numerics
    mode: str = Field(default_factory=lambda: os.getenv("SPIKE_REGIONS_MODE", "exact").lower())
    tolerance: float = Field(default_factory=lambda: float(os.getenv("SPIKE_REGIONS_TOLERANCE", "1e-9")))

    # Experiments
    seed: int = Field(default_factory=lambda: int(os.getenv("SPIKE_REGIONS_SEED", "0")))
    box: str = Field(default_factory=lambda: os.getenv("SPIKE_REGIONS_BOX", "-1,1x-1,1"))
    samples: int = Field(default_factory=lambda: int(os.getenv("SPIKE_REGIONS_SAMPLES", "100000")))
    output_dir: Path = Field(default_factory=lambda: Path(os.getenv("SPIKE_REGIONS_OUTPUT_DIR", "./results")))

    # Logging Configuration
    log_level: str = Field(default_factory=lambda: os.getenv("LOG_LEVEL", "INFO"))
    log_file: str = Field(default_factory=lambda: os.getenv("LOG_FILE", "spike_regions.log"))

    def parsed_box(self) -> Box:
        return parse_box(self.box)

    def validate_config(self) -> list[str]:
        """Validate configuration and return list of errors"""
        errors = []

        if self.mode not in ("exact", "float"):
            errors.append(f"SPIKE_REGIONS_MODE must be 'exact' or 'float', got '{self.mode}'")

        if not self.tolerance > 0:
            errors.append(f"SPIKE_REGIONS_TOLERANCE must be positive, got {self.tolerance}")

        if not 0 <= self.seed < 2 ** 64:
            errors.append(f"SPIKE_REGIONS_SEED must fit in 64 bits, got {self.seed}")

        try:
            self.parsed_box()
        except ValueError as e:
            errors.append(f"SPIKE_REGIONS_BOX is malformed: {e}")

        if self.samples < 1:
            errors.append(f"SPIKE_REGIONS_SAMPLES must be positive, got {self.samples}")

        return errors


# Global config instance
config = Config()
