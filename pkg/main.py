#!/usr/bin/env python3
"""
mobb - main entry point
Same as the installed `mobb` console script; lets a source checkout run
`python main.py solve instance.boilp --version BS1` without installing.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from mobb.cli import main  # noqa: E402

if __name__ == "__main__":
    main()
