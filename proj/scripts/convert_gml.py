#!/usr/bin/env python3
"""Convert a GML graph (e.g. Krebs' political books, polbooks.gml) into the
edge-list and label files read by `specdet`.

    python3 scripts/convert_gml.py polbooks.gml data/polbooks

writes data/polbooks/edges.txt and data/polbooks/labels.txt. Node ids are the
GML `id` values; the label file carries each node's `value` attribute
("l", "n", "c" for the political books). Only the flat node/edge subset of
GML is understood.
"""

import argparse
import re
import sys
from pathlib import Path

TOKEN = re.compile(r'"[^"]*"|\[|\]|[^\s\[\]]+')


def parse_gml(text):
    tokens = TOKEN.findall(text)
    pos = 0

    def block():
        nonlocal pos
        items = []
        while pos < len(tokens):
            tok = tokens[pos]
            pos += 1
            if tok == "]":
                return items
            if pos >= len(tokens):
                raise ValueError(f"dangling key {tok!r}")
            val = tokens[pos]
            pos += 1
            if val == "[":
                items.append((tok, block()))
            else:
                items.append((tok, val.strip('"')))
        return items

    top = block()
    for key, val in top:
        if key == "graph":
            return val
    raise ValueError("no graph block")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("gml")
    ap.add_argument("outdir")
    ap.add_argument("--label-key", default="value", help="node attribute written as the label")
    args = ap.parse_args()

    graph = parse_gml(Path(args.gml).read_text(encoding="utf-8", errors="replace"))
    nodes, edges = [], []
    for key, val in graph:
        if key == "node":
            attrs = dict(val)
            nodes.append((attrs["id"], attrs.get(args.label_key, "")))
        elif key == "edge":
            attrs = dict(val)
            edges.append((attrs["source"], attrs["target"]))

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "edges.txt", "w") as f:
        f.write(f"# converted from {Path(args.gml).name}: {len(nodes)} nodes, {len(edges)} edges\n")
        # Declare nodes first so ids keep the GML order.
        for nid, _ in nodes:
            f.write(f"{nid}\n")
        for s, t in edges:
            f.write(f"{s} {t}\n")
    with open(out / "labels.txt", "w") as f:
        for nid, label in nodes:
            if label:
                f.write(f"{nid} {label}\n")
    print(f"{len(nodes)} nodes, {len(edges)} edges -> {out}", file=sys.stderr)


if __name__ == "__main__":
    main()
