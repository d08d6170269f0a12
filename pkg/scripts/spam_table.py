"""Spam error table across split seeds and both length-column policies."""
import argparse
import os
from pathlib import Path

import numpy as np

from popkda.dataprep import prepare_spam
from popkda.kernels import InhomoPoly
from popkda.sample import choose_threshold, classify, fit_moment_space

ROOT = Path(__file__).resolve().parents[1]


def default_path() -> Path:
    for cand in (os.environ.get("SPAMBASE_PATH"), ROOT / "data" / "spambase.data",
                 ROOT / "data" / "spambase_keel.data"):
        if cand and Path(cand).is_file():
            return Path(cand)
    raise SystemExit("no spambase file; run scripts/fetch_spambase.py")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", type=Path, default=None)
    ap.add_argument("--seeds", type=int, default=8)
    args = ap.parse_args()
    path = args.data or default_path()
    print(f"data: {path}")
    for policy in ("logit-log", "logit-all"):
        errs, ratios = [], []
        for seed in range(args.seeds):
            data = prepare_spam(path, seed=seed, policy=policy)
            row_e, row_r = [], []
            for d in range(1, 7):
                m = choose_threshold(fit_moment_space(data.train, InhomoPoly(d)), data.train)
                row_r.append(m.lam)
                row_e.append(classify(m, data.test.points, data.test.labels).error)
            errs.append(row_e)
            ratios.append(row_r)
        errs, ratios = np.array(errs), np.array(ratios)
        print(f"{policy}: explained variance {data.pca.explained.sum():.4f}")
        for d in range(6):
            print(f"  degree {d + 1}: ratio {ratios[:, d].mean():.4f}  test error {errs[:, d].mean():.4f} "
                  f"[{errs[:, d].min():.4f}, {errs[:, d].max():.4f}]")
