"""Shared bits for the experiment scripts: argument parsing and optional plotting."""

import argparse
from pathlib import Path


def parser(description: str, default_out: str) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--out", type=Path, default=Path(default_out))
    ap.add_argument("--threads", type=int, default=0, help="0 uses all cores")
    ap.add_argument("--plot", action="store_true", help="also write a PNG (needs matplotlib)")
    return ap


def pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt
