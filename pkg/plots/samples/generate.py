#!/usr/bin/env python3
"""Regenerate the shipped sample tables by invoking the simulator CLI.

The plotting package consumes only the simulator's command-line interface and
its CSV/JSON file formats; nothing here imports the simulator.  Seeds are
pinned, so the data tables regenerate byte-identically (the .meta.json
sidecars record wall-clock timing and will differ in that field).
"""

from __future__ import annotations

import os
import subprocess
import sys

HERE = os.path.dirname(os.path.abspath(__file__))


def run(*args: str) -> None:
    cmd = [sys.executable, "-m", "monikit.cli", *args]
    print("+", " ".join(cmd), flush=True)
    subprocess.run(cmd, check=True, cwd=HERE)


def main() -> None:
    # Volume-law-phase arcs at the tetrahedron centroid, two sizes,
    # plus the joint profile-ansatz fit (arc-style figure with overlay).
    run("run", "--kind", "arc", "--sizes", "12,16",
        "--point", "0.25,0.25,0.25,0.25", "--samples", "60",
        "--seed", "41001", "--out", os.path.join(HERE, "arc_centroid.csv"))
    run("fit", "page", "--csv", os.path.join(HERE, "arc_centroid.csv"),
        "--out", os.path.join(HERE, "arc_page_fit.json"))

    # Critical-boundary arc plus the Lifshitz-profile fit; the fit file
    # embeds the 100-point J(x) reference grid used for cross-checks.
    run("run", "--kind", "arc", "--sizes", "12", "--line", "isotropic",
        "--p-values", "0.683", "--samples", "80",
        "--seed", "41002", "--out", os.path.join(HERE, "arc_liquid.csv"))
    run("fit", "lifshitz", "--csv", os.path.join(HERE, "arc_liquid.csv"),
        "--out", os.path.join(HERE, "arc_lifshitz_fit.json"))

    # Mutual-information scan across the upper transition, two sizes,
    # plus the finite-size crossing fit (crossing-style figure).  The
    # 16/20 pair crosses inside this window at these statistics.
    run("run", "--kind", "tmi_scan", "--sizes", "16,20",
        "--line", "isotropic", "--p-values", "0.64:0.76:0.04",
        "--samples", "120", "--seed", "41003",
        "--out", os.path.join(HERE, "tmi_scan.csv"))
    try:
        run("fit", "crossing", "--csv", os.path.join(HERE, "tmi_scan.csv"),
            "--out", os.path.join(HERE, "crossing_fit.json"))
    except subprocess.CalledProcessError:
        print("warning: no crossing located in the sample window; "
              "the crossing figure renders without a marker", flush=True)

    # Purification decay at the two code points and the free point.
    run("run", "--kind", "purify", "--sizes", "8",
        "--point", "0,0.1,0.1,0.8", "--point", "0.8,0.0667,0.0667,0.0666",
        "--point", "0,0.3334,0.3333,0.3333", "--samples", "150",
        "--sweeps", "200", "--seed", "41004",
        "--out", os.path.join(HERE, "purify.csv"))

    # Topological-entropy scan along the isotropic line.
    run("run", "--kind", "tee_scan", "--sizes", "8", "--line", "isotropic",
        "--p-values", "0.5:0.9:0.1", "--samples", "80",
        "--seed", "41005", "--out", os.path.join(HERE, "tee_scan.csv"))

    # Half-cylinder entropy along the isotropic line (phase-map cut).
    run("run", "--kind", "phase_cut", "--sizes", "8,12",
        "--line", "isotropic", "--p-values", "0.55:0.80:0.05",
        "--samples", "80", "--seed", "41006",
        "--out", os.path.join(HERE, "phase_cut.csv"))


if __name__ == "__main__":
    main()
