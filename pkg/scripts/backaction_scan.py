#!/usr/bin/env python3
"""Classical and quantized disturbance scans, written as CSV."""

import argparse
from pathlib import Path

import numpy as np

from kleene.backaction import OscillatorSystem, default_duration, disturbance_scan, quantized_scan, scan_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--points", type=int, default=13, help="mass ratios from 1 down to 1e-4")
    ap.add_argument("--h", type=float, default=1.0)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    mus = [float(m) for m in np.logspace(0, -4, args.points)]
    base = OscillatorSystem()
    T = default_duration(base)
    rows = disturbance_scan(base, mus, T)
    (args.out / "backaction_classical.csv").write_text(scan_csv(rows, base, T))

    qbase = OscillatorSystem(h=args.h)
    qrows = quantized_scan(qbase, mus, T)
    (args.out / "backaction_quantized.csv").write_text(scan_csv(qrows, qbase, T))

    # slope of log D against log mu over the weak-coupling end
    tail = [r for r in rows if r.mu <= 1e-2]
    slope = np.polyfit(np.log10([r.mu for r in tail]), np.log10([r.disturbance for r in tail]), 1)[0]
    print(f"{len(rows)} mass ratios, D from {rows[0].disturbance:.3g} to {rows[-1].disturbance:.3g}")
    print(f"log-log slope for mu <= 1e-2: {slope:.3f}")
    print(f"quantized floor eps/E0 = {qrows[-1].quantized_disturbance:.4f}")


if __name__ == "__main__":
    main()
