#!/usr/bin/env python3
"""Convert a LINQS citation dataset (cora, citeseer) to the cluster input files.

The LINQS archives ship <name>.content (paper id, binary word vector, class)
and <name>.cites (cited id, citing id). Papers are renumbered 0..n-1 in file
order; citations that mention an unknown paper are dropped. Edges point from
the citing paper to the cited one.

    python3 tools/convert_linqs.py cora/cora.content cora/cora.cites data/cora
"""

import argparse
import csv
import pathlib
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("content", type=pathlib.Path)
    parser.add_argument("cites", type=pathlib.Path)
    parser.add_argument("out_dir", type=pathlib.Path)
    args = parser.parse_args()

    ids, rows, classes = {}, [], []
    with args.content.open() as f:
        for line in f:
            parts = line.split()
            if not parts:
                continue
            ids[parts[0]] = len(rows)
            rows.append(parts[1:-1])
            classes.append(parts[-1])

    class_ids = {name: k for k, name in enumerate(sorted(set(classes)))}
    edges, dropped = set(), 0
    with args.cites.open() as f:
        for line in f:
            parts = line.split()
            if len(parts) != 2:
                continue
            cited, citing = parts
            if cited not in ids or citing not in ids or cited == citing:
                dropped += 1
                continue
            edges.add((ids[citing], ids[cited]))

    args.out_dir.mkdir(parents=True, exist_ok=True)
    with (args.out_dir / "attrs.csv").open("w", newline="") as f:
        csv.writer(f).writerows(rows)
    with (args.out_dir / "edges.txt").open("w") as f:
        for src, dst in sorted(edges):
            f.write(f"{src} {dst}\n")
    with (args.out_dir / "labels.csv").open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["id", "label"])
        for i, name in enumerate(classes):
            w.writerow([i, class_ids[name]])

    print(f"{len(rows)} objects, {len(rows[0]) if rows else 0} attributes, {len(edges)} edges, "
          f"{len(class_ids)} classes, {dropped} citations dropped", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
