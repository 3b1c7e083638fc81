#!/usr/bin/env python3
"""Generate and verify the deterministic realization corpus.

Writes summary.json into the output directory and prints one line per
member.  Equivalent to `python -m kronrod corpus --seed S --out DIR`.
"""

import argparse
import json
from pathlib import Path

from kronrod.corpus import corpus_summary


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="corpus_out")
    args = ap.parse_args()

    summary = corpus_summary(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2))

    for r in summary["realizations"]:
        status = "ok" if r["ok"] else "FAIL"
        print(f"{status:4s} {r['label']}")
    oracle_ok = sum(1 for o in summary["oracle"] if o["ok"])
    print(f"oracle fields: {oracle_ok}/{len(summary['oracle'])} ok")
    print(f"summary: {out / 'summary.json'}")
    return 0 if summary["ok"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
