"""Elementary divisors of the tube lattice as the word-length budget grows, for each marked pair."""

import argparse
from pathlib import Path

from vclab import covertop, monodromy, pencil, tube

DATA = Path(__file__).resolve().parents[1] / "src" / "vclab" / "data"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("curve", nargs="?", default="quartic")
    parser.add_argument("--max-len", type=int, default=4)
    parser.add_argument("--all-pairs", action="store_true", help="use every transposition as marked pair")
    args = parser.parse_args()
    curve = pencil.load_curve(DATA / f"{args.curve}.json")
    mdata = monodromy.monodromy_rep(curve)
    cover = covertop.build_cover(mdata)
    loops = range(mdata.e) if args.all_pairs else [0]
    seen = set()
    for k in loops:
        marked = monodromy.default_marked_pair(mdata, k)
        if marked in seen:
            continue
        seen.add(marked)
        orbit = monodromy.pair_stabilizer(mdata, marked)
        rep = tube.tube_lattice(mdata, orbit, cover, args.max_len)
        print(f"marked {marked}: index={orbit.index} generators={len(orbit.stabilizer_words)} "
              f"m={rep.m} stabilized_at={rep.stabilized_at}")
        for length, divs in enumerate(rep.history):
            print(f"  length {length}: {list(divs)}")


if __name__ == "__main__":
    main()
