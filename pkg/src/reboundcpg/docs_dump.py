"""Dump the normalized config of every preset (documentation helper).

Usage: python3 -m reboundcpg.docs_dump <output-dir>
"""

import json
import sys
from pathlib import Path

from .presets import PRESETS, load_preset


def main(argv=None) -> int:
    args = sys.argv[1:] if argv is None else argv
    out = Path(args[0]) if args else Path("docs/presets")
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(PRESETS):
        path = out / f"{name}.json"
        with open(path, "w") as fh:
            json.dump(load_preset(name).to_config(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
