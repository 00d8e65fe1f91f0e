#!/usr/bin/env python3
"""
SchurLab Main Entry Point

Runs the command-line interface; without arguments prints usage.
"""

import logging
import sys
from pathlib import Path

# Add current directory to Python path for imports
sys.path.insert(0, str(Path(__file__).parent))

from app.cli import build_parser, main as cli_main
from core.config import config

logging.basicConfig(
    level=getattr(logging, config.log_level.upper(), logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr,
)


def main() -> int:
    """Main entry point"""
    if len(sys.argv) > 1:
        return cli_main(sys.argv[1:])

    print("SchurLab - Schur processes, plane partitions and their kernels")
    print("=" * 60)
    print()
    print("Usage options:")
    print("   python main.py verify [--suites mcmahon,kernel_bruteforce,...] [--q 0.3]")
    print("   python main.py kernel --kind 3d --q 0.3 --points '0,0.5;1,0'")
    print("   python main.py density --grid=-3:3:41,-3:3:41 --format svg")
    print("   python main.py limit-shape --grid=-3:3:41,-1:4:41 --out shape.csv")
    print("   python main.py sample --r 0.1 --box 20,20,20 --steps 5000000 --seed 1")
    print()
    build_parser().print_help()
    return 0


if __name__ == "__main__":
    sys.exit(main())
