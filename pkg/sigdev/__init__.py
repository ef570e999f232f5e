"""Schwinger-Dyson signature kernels, random developments and path MMDs."""

from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
ENV_PATH = ROOT / ".env"

# Dense tensors (signature levels, moment tensors) are refused above this many entries.
MAX_TENSOR_ENTRIES = 10**7
