"""Run the acceptance suite and print one verdict line per criterion.

Pass --fast to skip the A5 criteria (marked slow).
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    args = [sys.executable, "-m", "pytest", "-q", str(ROOT / "tests" / "test_acceptance.py")]
    if "--fast" in sys.argv[1:]:
        args += ["-m", "not slow"]
    p = subprocess.run(args, cwd=ROOT, capture_output=True, text=True)
    lines = [ln for ln in p.stdout.splitlines() if ln.startswith("criterion ")]
    print("\n".join(lines) if lines else p.stdout)
    return p.returncode


if __name__ == "__main__":
    sys.exit(main())
