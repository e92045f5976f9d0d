#!/usr/bin/env python3
"""
Launcher script for the Contractive Inequality Lab
Run this from a checkout without installing: python launch_app.py test burbea --p 1
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent.absolute()
sys.path.insert(0, str(project_root))

from app.cli import main

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        sys.exit(130)
