# Copyright 2026 The hnlab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Plot template for hnlab output directories.

Reads spectra/*.csv, curve/arcs.csv and curve/sigma.csv and draws
eigenvalues over the traced curve, one panel per spectrum file given on the
command line (default: every file under spectra/).

    python3 scripts/plot_spectra.py OUT_DIR [spectra/n201_r0.csv ...] [-o figure.png]
"""

import argparse
import csv
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read_csv(path):
    meta, rows, header = {}, [], None
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
                continue
            header = next(csv.reader([line]))
            break
        for row in csv.reader(fh):
            rows.append({k: float(v) for k, v in zip(header, row)})
    return meta, rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir", type=pathlib.Path)
    ap.add_argument("spectra", nargs="*")
    ap.add_argument("-o", "--output", default="spectra.png")
    args = ap.parse_args()

    files = [args.out_dir / s for s in args.spectra] or sorted((args.out_dir / "spectra").glob("n*_r*.csv"))
    if not files:
        raise SystemExit("no spectra found; run `hnlab spectrum` first")
    arcs_path = args.out_dir / "curve" / "arcs.csv"
    sigma_path = args.out_dir / "curve" / "sigma.csv"
    arcs = read_csv(arcs_path)[1] if arcs_path.exists() else []
    sigma = read_csv(sigma_path)[1] if sigma_path.exists() else []

    fig, axes = plt.subplots(1, len(files), figsize=(5 * len(files), 4.5), squeeze=False)
    for ax, path in zip(axes[0], files):
        meta, rows = read_csv(path)
        ax.plot([r["re"] for r in rows], [r["im"] for r in rows], ".", ms=3, color="k")
        for arc_id in sorted({int(p["arc"]) for p in arcs}):
            pts = [p for p in arcs if int(p["arc"]) == arc_id]
            xs = [p["x"] for p in pts]
            ys = [p["y"] for p in pts]
            ax.plot(xs, ys, "-", color="tab:red", lw=1)
            ax.plot(xs, [-y for y in ys], "-", color="tab:red", lw=1)
        for iv in sigma:
            ax.plot([iv["lo"], iv["hi"]], [0, 0], "-", color="tab:blue", lw=3, alpha=0.5)
        ax.set_title(f"n = {meta.get('n', '?')}, realization {meta.get('realization', '?')}")
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        ax.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
