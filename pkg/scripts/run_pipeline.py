"""Run the full report on every shipped curve and write one JSON file per curve."""

import argparse
import json
from pathlib import Path

from vclab.cli import run_report
from vclab.config import RunConfig

DATA = Path(__file__).resolve().parents[1] / "src" / "vclab" / "data"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="reports", help="output directory")
    parser.add_argument("--curves", nargs="*", default=["conic", "cubic", "quartic"])
    parser.add_argument("--max-word-len", type=int, default=6)
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig(max_word_len=args.max_word_len)
    for name in args.curves:
        doc, code = run_report(DATA / f"{name}.json", cfg)
        (out / f"{name}.json").write_text(json.dumps(doc, sort_keys=True, indent=1))
        tube = doc.get("tube", {})
        print(f"{name:8s} exit={code} e={doc['pencil']['e']} g={doc['pencil']['genus']} "
              f"m={tube.get('m')} status={doc['status']}")


if __name__ == "__main__":
    main()
