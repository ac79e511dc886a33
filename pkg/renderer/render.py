#!/usr/bin/env python3
"""Entry point: render.py <trajectory> <out_dir> [--device D] [--batch-size N]."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from ganterp_renderer.cli import main

if __name__ == "__main__":
    sys.exit(main())
