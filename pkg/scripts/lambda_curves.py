"""Separation ratio against truncation degree (polynomial) and feature count (random features)."""
import argparse

from popkda.population import lambda_curve
from popkda.rff import lambda_curve as rff_curve, sample_features
from popkda.scenarios import scenario

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=20)
    ap.add_argument("--d-max", type=int, default=40)
    ap.add_argument("--seeds", type=int, default=5, help="feature draws per scenario")
    args = ap.parse_args()
    for sid in (1, 2):
        poly = lambda_curve(scenario(sid), args.n_max)
        print(f"scenario {sid}: polynomial lambda_N")
        print("  " + " ".join(f"{lam:.4f}" for _, lam in poly))
        for seed in range(args.seeds):
            feats = sample_features(2, args.d_max, 1.0, "cos", seed)
            curve = rff_curve(scenario(sid), feats)
            marks = {D: lam for D, lam in curve if D in (2, 5, 10, 20, args.d_max)}
            print(f"  features seed {seed}: " + ", ".join(f"D={D}: {lam:.4f}" for D, lam in marks.items()))
