#!/usr/bin/env python3
"""Rewrites gallery/golden/*.json from the chartnav CLI.

    python3 gallery/update_goldens.py build/tools/chartnav
"""

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent


def main():
    if len(sys.argv) != 2:
        sys.exit("usage: update_goldens.py path/to/chartnav")
    cli = sys.argv[1]
    for entry in json.loads((ROOT / "manifest.json").read_text()):
        cmd = [cli, "build", "--spec", str(ROOT / entry["spec"]), "--data", str(ROOT / entry["data"]),
               "--variant", entry["variant"], "--out", str(ROOT / entry["golden"])]
        for path in entry.get("drill", []):
            cmd += ["--drill", ",".join(path)]
        subprocess.run(cmd, check=True, stdout=subprocess.DEVNULL)
        print(entry["golden"])


if __name__ == "__main__":
    main()
