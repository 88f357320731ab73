#!/usr/bin/env python3
"""Terminal previews for covoter output files.

    preview.py out/graphon.pgm      render the heatmap as ASCII shades
    preview.py out/fraction.csv     plot the Plus-fraction path
    preview.py out/density.csv      show the final density slice
    preview.py out/histogram.csv    compare bin masses against the Beta fit

Stdlib only; intended for quick looks inside a terminal session.
"""

import argparse
import csv
import sys

SHADES = " .:-=+*#%@"  # light to dark


def load_pgm(path):
    with open(path, "rb") as f:
        data = f.read()
    if not data.startswith(b"P5"):
        sys.exit(f"{path}: not a binary PGM file")
    fields, pos = [], 2
    while len(fields) < 3:  # width, height, maxval; '#' comments allowed
        end = data.index(b"\n", pos)
        line = data[pos:end].split(b"#")[0].split()
        fields.extend(int(v) for v in line)
        pos = end + 1
    w, h, maxval = fields[:3]
    px = data[pos:pos + w * h]
    return w, h, maxval, px


def cmd_pgm(path, width):
    w, h, maxval, px = load_pgm(path)
    cols = min(width, w)
    rows = max(1, (h * cols) // (2 * w))  # terminal cells are ~2x taller than wide
    out = []
    for r in range(rows):
        line = []
        for c in range(cols):
            y = r * h // rows
            x = c * w // cols
            v = px[y * w + x] / maxval
            # PGM stores darker = larger value; map back to shade density
            line.append(SHADES[min(len(SHADES) - 1, int((1 - v) * len(SHADES)))])
        out.append("".join(line))
    print(f"{path}: {w}x{h}")
    print("\n".join(out))


def read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        sys.exit(f"{path}: no data rows")
    return rows


def ascii_plot(xs, ys, height, width, label):
    lo, hi = min(ys), max(ys)
    span = (hi - lo) or 1.0
    cols = min(width, len(ys))
    grid = [[" "] * cols for _ in range(height)]
    for c in range(cols):
        i = c * (len(ys) - 1) // max(1, cols - 1)
        r = round((ys[i] - lo) / span * (height - 1))
        grid[height - 1 - r][c] = "*"
    print(f"{label}  [{lo:.4g}, {hi:.4g}]  x: {xs[0]:.4g} .. {xs[-1]:.4g}")
    for row in grid:
        print("|" + "".join(row))
    print("+" + "-" * cols)


def cmd_fraction(path, width):
    rows = read_csv(path)
    t = [float(r["t"]) for r in rows]
    frac = [float(r["frac_plus"]) for r in rows]
    ascii_plot(t, frac, 12, width, "frac_plus(t)")


def cmd_density(path, width):
    rows = read_csv(path)
    t_last = rows[-1]["t"]
    last = [r for r in rows if r["t"] == t_last]
    u = [float(r["u"]) for r in last]
    for col in ("f_plus", "f_minus"):
        ascii_plot(u, [float(r[col]) for r in last], 8, width, f"{col}(t={t_last}, u)")


def cmd_histogram(path, width):
    rows = read_csv(path)
    peak = max(max(float(r["mass"]), float(r["beta_mass"])) for r in rows) or 1.0
    bar = max(10, width - 30)
    print(f"{'bin':>14}  {'mass':>8}  {'beta':>8}  (# simulated, . reference)")
    for r in rows:
        m, b = float(r["mass"]), float(r["beta_mass"])
        lo, hi = float(r["bin_left"]), float(r["bin_right"])
        cells = ["."] * round(b / peak * bar)
        for i in range(round(m / peak * bar)):
            if i < len(cells):
                cells[i] = "#"
            else:
                cells.append("#")
        print(f"[{lo:5.3f},{hi:5.3f})  {m:8.4f}  {b:8.4f}  {''.join(cells)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("path", help="graphon .pgm, fraction/density/histogram .csv")
    ap.add_argument("--width", type=int, default=100, help="max output width")
    args = ap.parse_args()

    if args.path.endswith(".pgm"):
        cmd_pgm(args.path, args.width)
    elif args.path.endswith("fraction.csv"):
        cmd_fraction(args.path, args.width)
    elif args.path.endswith("density.csv"):
        cmd_density(args.path, args.width)
    elif args.path.endswith("histogram.csv") or "/hist_" in args.path:
        cmd_histogram(args.path, args.width)
    else:
        sys.exit("unrecognized file; expected *.pgm, fraction.csv, density.csv or histogram.csv")


if __name__ == "__main__":
    main()
