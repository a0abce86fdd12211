#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the full-precision Type I lowpass/bandpass coefficient fixtures.

Each file holds one coefficient per line at 17 significant digits. The designs
are equiripple (Remez exchange) on the band layouts A-D; those layouts are also
built into the library (bitalloc::table_filter_spec).
"""
import pathlib

from scipy.signal import remez

SPECS = {
    "A": ([0.0, 0.4, 0.5, 1.0], [1, 0], [1, 1]),
    "B": ([0.0, 0.4, 0.5, 1.0], [1, 0], [1, 10]),
    "C": ([0.0, 0.24, 0.4, 0.68, 0.84, 1.0], [1, 0, 1], [1, 1, 1]),
    "D": ([0.02, 0.42, 0.52, 0.98], [1, 0], [1, 1]),
}


def main():
    out = pathlib.Path(__file__).resolve().parent
    for name, (bands, desired, weight) in SPECS.items():
        for taps in (35, 45):
            h = remez(taps, bands, desired, weight=weight, fs=2,
                      maxiter=200, grid_density=32)
            h = (h + h[::-1]) / 2  # exact even symmetry
            path = out / f"{name}{taps}.txt"
            with path.open("w") as f:
                f.write(f"# {name}{taps}: equiripple Type I, bands (x pi) {bands}, "
                        f"D {desired}, W {weight}\n")
                for x in h:
                    f.write(f"{x:.17g}\n")


if __name__ == "__main__":
    main()
