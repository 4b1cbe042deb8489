"""
Chern-Calabi flow simulator - command line entry.

    python main.py run assets/configs/flat_run.conf
    python main.py verify assets/configs/pluriclosed_verify.conf
    python main.py gen assets/configs/gen_constant_det.conf

Equivalent to ``python -m src.cli``.
"""

import sys

from dotenv import load_dotenv

load_dotenv()

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
