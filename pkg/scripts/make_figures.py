"""Write the six figure data files (CSV, optionally SVG)."""
import argparse
import logging

from wkmoduli.export import DEFAULT_GRID, write_figures


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir", nargs="?", default="figures")
    ap.add_argument("--m-min", type=float, default=DEFAULT_GRID[0])
    ap.add_argument("--m-max", type=float, default=DEFAULT_GRID[1])
    ap.add_argument("--samples", type=int, default=DEFAULT_GRID[2])
    ap.add_argument("--svg", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)
    for path in write_figures(args.out_dir, args.m_min, args.m_max, args.samples, svg=args.svg):
        print(path)


if __name__ == "__main__":
    main()
