#!/usr/bin/env python3
# Copyright 2026 The ipte Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Downloads the datasets listed in data/manifest.json and writes header CSVs.

Entries with a null sha256 are fetched anyway and the digest is printed;
pass --pin to write it back into the manifest.
"""

import argparse
import csv
import hashlib
import io
import json
import pathlib
import sys
import urllib.request
import zipfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
DELIMITERS = {"comma": ",", "semicolon": ";"}


def rows_of(text, source):
    delimiter = source.get("delimiter", "comma")
    if delimiter == "whitespace":
        rows = [line.split() for line in text.splitlines()]
    else:
        rows = list(csv.reader(io.StringIO(text), delimiter=DELIMITERS[delimiter]))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if source.get("header"):
        return rows
    return [source["columns"]] + rows


def fetch(entry, out_dir, force):
    target = out_dir / f"{entry['name']}.csv"
    if target.exists() and not force:
        print(f"{entry['name']}: exists, skipped")
        return None
    with urllib.request.urlopen(entry["url"], timeout=60) as response:
        raw = response.read()
    digest = hashlib.sha256(raw).hexdigest()
    if entry["sha256"] and entry["sha256"] != digest:
        raise RuntimeError(f"{entry['name']}: sha256 mismatch ({digest})")
    source = entry.get("source", {})
    if "member" in source:
        with zipfile.ZipFile(io.BytesIO(raw)) as archive:
            raw = archive.read(source["member"])
    text = raw.decode("utf-8-sig")
    with target.open("w", newline="") as f:
        csv.writer(f, lineterminator="\n").writerows(rows_of(text, source))
    print(f"{entry['name']}: {target} sha256={digest}")
    return digest


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", help="subset of manifest names")
    parser.add_argument("--manifest", type=pathlib.Path,
                        default=ROOT / "data" / "manifest.json")
    parser.add_argument("--out", type=pathlib.Path, default=ROOT / "data")
    parser.add_argument("--force", action="store_true")
    parser.add_argument("--pin", action="store_true",
                        help="record fetched digests in the manifest")
    args = parser.parse_args()

    manifest = json.loads(args.manifest.read_text())
    known = {e["name"] for e in manifest}
    unknown = set(args.names) - known
    if unknown:
        parser.error(f"unknown dataset(s): {', '.join(sorted(unknown))}")
    args.out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for entry in manifest:
        if args.names and entry["name"] not in args.names:
            continue
        try:
            digest = fetch(entry, args.out, args.force)
        except Exception as e:  # keep going with the rest
            print(f"{entry['name']}: {e}", file=sys.stderr)
            failed += 1
            continue
        if digest and args.pin and not entry["sha256"]:
            entry["sha256"] = digest
    if args.pin:
        args.manifest.write_text(json.dumps(manifest, indent=2) + "\n")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
