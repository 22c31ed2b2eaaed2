#!/usr/bin/env python3
"""Plot satisfaction/stability points and their Pareto front from metric CSVs.

Input files use the sweep schema
(rule,repetition,events,satisfaction,stability,solution_size) with an
optional trailing `dominated` column; rows from every input are merged.

    plot_pareto.py sweep-out/aggregated.csv -o front.png
"""

import argparse
import csv
import sys


def read_points(paths):
    points = []
    for path in paths:
        with open(path, newline="") as handle:
            for row in csv.DictReader(handle):
                points.append(
                    {
                        "rule": row["rule"],
                        "satisfaction": float(row["satisfaction"]),
                        "stability": float(row["stability"]),
                    }
                )
    return points


def dominated(point, others):
    return any(
        o["satisfaction"] >= point["satisfaction"]
        and o["stability"] >= point["stability"]
        and (o["satisfaction"] > point["satisfaction"] or o["stability"] > point["stability"])
        for o in others
    )


def family(rule):
    dynamizer = rule.split("|")[1]
    if not dynamizer:
        return "static"
    return dynamizer.split(":")[0].lower()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("inputs", nargs="+", help="metric CSV files")
    parser.add_argument("-o", "--out", help="output image (default: show interactively)")
    parser.add_argument("--title", default="Satisfaction vs. stability")
    args = parser.parse_args()

    try:
        import matplotlib

        if args.out:
            matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required: pip install matplotlib")

    points = read_points(args.inputs)
    if not points:
        sys.exit("no data rows in the inputs")
    front = sorted(
        (p for p in points if not dominated(p, points)),
        key=lambda p: (-p["satisfaction"], -p["stability"]),
    )

    fig, ax = plt.subplots(figsize=(7, 5))
    markers = {"static": "o", "harsh": "s", "smooth": "^"}
    for name, marker in markers.items():
        xs = [p["stability"] for p in points if family(p["rule"]) == name]
        ys = [p["satisfaction"] for p in points if family(p["rule"]) == name]
        if xs:
            ax.scatter(xs, ys, marker=marker, alpha=0.6, label=name)
    ax.plot(
        [p["stability"] for p in front],
        [p["satisfaction"] for p in front],
        "k--",
        linewidth=1,
        label="Pareto front",
    )
    for p in front:
        ax.annotate(p["rule"].split("|")[0], (p["stability"], p["satisfaction"]), fontsize=7)

    ax.set_xlabel("stability")
    ax.set_ylabel("normalized satisfaction")
    ax.set_title(args.title)
    ax.legend()
    fig.tight_layout()
    if args.out:
        fig.savefig(args.out, dpi=150)
        print(f"wrote {args.out}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
