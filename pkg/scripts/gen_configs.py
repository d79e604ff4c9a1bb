#!/usr/bin/env python3
"""Regenerate the config documents shipped under configs/."""

import json
from pathlib import Path

from officelab.config import parse_config
from officelab.presets import demo_config, full_scale_config

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def main() -> None:
    CONFIG_DIR.mkdir(exist_ok=True)
    for name, doc in (
        ("demo.json", demo_config(seed=42)),
        ("full_scale.json", full_scale_config(seed=7, days=5)),
    ):
        parse_config(doc)  # refuse to ship an invalid document
        (CONFIG_DIR / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(f"wrote configs/{name}")


if __name__ == "__main__":
    main()
