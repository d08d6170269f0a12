"""Download the UCI spambase file into data/spambase.data.

If the UCI server is unreachable, ``--from-keel FILE`` converts the KEEL
distribution of the same table (comma+space separated, four fewer rows) into
the plain CSV layout instead.
"""
import argparse
import sys
import urllib.request
from pathlib import Path

UCI_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/spambase/spambase.data"
ROOT = Path(__file__).resolve().parents[1]


def convert_keel(src: Path, dst: Path) -> int:
    rows = []
    for line in src.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append(",".join(v.strip() for v in line.split(",") if v.strip()))
    dst.write_text("\n".join(rows) + "\n")
    return len(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=None)
    ap.add_argument("--from-keel", type=Path, default=None, metavar="FILE")
    args = ap.parse_args()
    if args.from_keel:
        out = args.out or ROOT / "data" / "spambase_keel.data"
        n = convert_keel(args.from_keel, out)
        print(f"wrote {n} rows to {out}")
        return 0
    out = args.out or ROOT / "data" / "spambase.data"
    try:
        with urllib.request.urlopen(UCI_URL, timeout=30) as resp:
            body = resp.read()
    except OSError as exc:
        print(f"download failed: {exc}; data/spambase_keel.data is bundled as a fallback", file=sys.stderr)
        return 1
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(body)
    n = sum(1 for line in body.decode().splitlines() if line.strip())
    print(f"wrote {n} rows to {out}")
    if n != 4601:
        print(f"warning: expected 4601 rows, got {n}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
