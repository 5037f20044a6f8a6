#!/usr/bin/env python3
"""Regenerates data/demo.csv: 86 synthetic "countries" with six demographic
predictors (one of them pure noise), two strongly anti-correlated health
responses and a few unrelated food columns."""

import argparse
import csv

import numpy as np


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=2016)
    ap.add_argument("--out", default="data/demo.csv")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n = 86
    dev = rng.normal(size=n)  # latent development level

    fertility = 3.0 - 1.1 * dev + 0.45 * rng.normal(size=n)
    gni = 12000 + 9000 * (0.75 * dev + 0.65 * rng.normal(size=n))
    growth = 1.6 - 0.6 * dev + 0.8 * rng.normal(size=n)
    urban = 55 + 14 * (0.7 * dev + 0.7 * rng.normal(size=n))
    water = 80 + 10 * rng.normal(size=n)  # unrelated to everything else
    sanitation = 60 + 20 * (0.8 * dev + 0.5 * rng.normal(size=n))

    def z(v):
        return (v - v.mean()) / v.std(ddof=1)

    signal = 0.45 * z(fertility) - 0.12 * z(gni) + 0.05 * z(growth) - 0.12 * z(urban) - 0.38 * z(sanitation)
    yll_comm = 40 + 15 * (signal + 0.35 * rng.normal(size=n))
    yll_noncomm = 60 - 0.9 * (yll_comm - 40) + 15 * (0.1 * z(gni) - 0.08 * z(growth) + 0.12 * rng.normal(size=n))

    food = {
        "meat_kcal": 300 + 120 * rng.normal(size=n),
        "cereal_kcal": 1200 + 200 * rng.normal(size=n),
        "sugar_kcal": 250 + 80 * rng.normal(size=n),
    }

    columns = {
        "yll_communicable": yll_comm,
        "yll_noncommunicable": yll_noncomm,
        "fertility": fertility,
        "gni_per_capita": gni,
        "pop_growth": growth,
        "urban_pop": urban,
        "water_access": water,
        "sanitation_access": sanitation,
        **food,
    }
    names = list(columns)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for i in range(n):
            w.writerow([f"{columns[name][i]:.6f}" for name in names])


if __name__ == "__main__":
    main()
