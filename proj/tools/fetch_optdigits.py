#!/usr/bin/env python3
"""Regenerate data/optdigits.csv.

The 8x8 optical-recognition digits (1797 samples, UCI optdigits test split)
ship with scikit-learn as digits.csv.gz: 64 pixel counts in 0..16 followed by
the class label, comma separated. This script decompresses that file so the
C++ tools can read it without network access.
"""

import argparse
import gzip
import os
import shutil
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=os.path.join(
        os.path.dirname(__file__), "..", "data", "optdigits.csv"))
    args = parser.parse_args()

    try:
        import sklearn
    except ImportError:
        print("scikit-learn is required to locate digits.csv.gz", file=sys.stderr)
        return 1

    src = os.path.join(os.path.dirname(sklearn.__file__), "datasets", "data", "digits.csv.gz")
    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    with gzip.open(src, "rb") as fin, open(args.out, "wb") as fout:
        shutil.copyfileobj(fin, fout)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
