#!/usr/bin/env python3
# Copyright 2026 The ipte Authors
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
"""Writes a small trace as an external trainer would.

Only the last two fully connected layers (5 and 6) of a 7-layer network are
exported, one record per sample, analysed in batch-sized windows. The output
layer is driven by the previous step of layer 5 so that the pair carries
some directed dependence.
"""

import argparse
import json
import math
import random

WIDTHS = [784, 512, 256, 128, 64, 16, 10]
EPOCHS = 2
STEPS = 64
BATCH = 16


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out")
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    w = [[rng.gauss(0, 0.5) for _ in range(WIDTHS[5])] for _ in range(WIDTHS[6])]
    header = {
        "format": "ipte-trace",
        "version": 1,
        "run_id": "external-fc",
        "layer_widths": WIDTHS,
        "capture": {
            "percentile": 95.0,
            "warmup": {"count": 0},
            "window": {"mode": "per_batch", "size": BATCH},
            "threshold_scope": "window",
        },
        "seed": args.seed,
    }
    with open(args.out, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(header, separators=(",", ":")) + "\n")
        for epoch in range(EPOCHS):
            prev = [0.0] * WIDTHS[5]
            for step in range(STEPS):
                hidden = [max(0.0, rng.gauss(0, 1)) for _ in range(WIDTHS[5])]
                logits = [sum(wi * p for wi, p in zip(row, prev)) + rng.gauss(0, 0.1)
                          for row in w]
                top = max(logits)
                exps = [math.exp(z - top) for z in logits]
                out = [e / sum(exps) for e in exps]
                for layer, act in ((5, hidden), (6, out)):
                    rec = {"epoch": epoch, "step": step, "layer": layer,
                           "act": [round(a, 6) for a in act]}
                    f.write(json.dumps(rec, separators=(",", ":")) + "\n")
                prev = hidden


if __name__ == "__main__":
    main()
