#!/usr/bin/env python3
"""Write synthetic replay fixtures for an offline evaluation demo.

Example:
    python scripts/make_replay_fixtures.py --setting D --out fixtures/D
    gameforge eval --corpus corpus --setting D --session replay:fixtures/D
"""

import argparse
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from gameforge.fixtures import write_replay_fixtures  # noqa: E402
from gameforge.pipeline import Setting  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--setting", default="D")
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--out", required=True)
    args = parser.parse_args()
    write_replay_fixtures(args.out, Setting.parse(args.setting), k=args.k)
    print(f"fixtures written under {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
