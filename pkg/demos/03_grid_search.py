"""Staged hyperparameter search, driven through the command-line interface.

Writes a small synthetic dataset, then runs the greedy three-stage grid:
stage 1 picks the latent dimensions (k_s, k_c), stage 2 the reconstruction/
self-expression trade-off (lambda1, lambda2), stage 3 the structure penalty
(lambda3). Each stage fixes the winners of the previous ones. Results land
in a directory with one CSV per stage and a winner.json recording lineage.

    python demos/03_grid_search.py
"""

import json
import tempfile
from pathlib import Path

from mvsc.cli import main as mvsc


def main():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        data = tmp / "data"
        out = tmp / "grid"

        mvsc([
            "synth", "--out", str(data),
            "--views", "2", "--clusters", "3", "--samples", "60",
            "--ks", "6", "--kc", "6", "--intrinsic-dim", "2",
            "--noise", "0.05", "--seed", "3",
        ])

        # a deliberately small grid so the demo finishes in seconds;
        # the defaults sweep a much wider range
        mvsc([
            "grid", "--manifest", str(data / "manifest.json"),
            "--out", str(out), "--algorithm", "cslfs",
            "--grid-ks", "4", "8", "--grid-kc", "4", "8",
            "--grid-l1", "0.1", "1.0", "--grid-l2", "0.1", "1.0",
            "--grid-l3", "0.5", "1.0",
            "--repeats", "2", "--seed", "0", "--max-iters", "80",
        ])

        for stage in ("stage1", "stage2", "stage3"):
            print(f"\n--- {stage}.csv ---")
            print((out / f"{stage}.csv").read_text().strip())
        print("\n--- winner.json ---")
        print(json.dumps(json.loads((out / "winner.json").read_text()),
                         indent=2))


if __name__ == "__main__":
    main()
