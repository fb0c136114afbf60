"""Runs a small config through the CLI and validates every output against the
published schema and CSV column contracts."""

import csv
import json
import pathlib
import subprocess
import sys

import jsonschema

CONFIG = """suites = ["cheeger", "spectral_oracle", "product", "kway", "drop", "pagerank", "walks", "powering", "partition"]
workers = 1

[[family]]
generator = "dumbbell"
m = [5, 16]
seeds = [1]

[[family]]
generator = "cycle"
n = 12
seeds = [2]

[[family]]
generator = "planted"
k = 2
m = 8
p_in = 0.9
seeds = [3]
"""


def main():
    exe, work = sys.argv[1], pathlib.Path(sys.argv[2])
    work.mkdir(parents=True, exist_ok=True)
    schema = json.loads(subprocess.run([exe, "schema"], check=True, capture_output=True, text=True).stdout)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    config = work / "roundtrip.toml"
    config.write_text(CONFIG)
    out = work / "out"
    proc = subprocess.run([exe, "run", str(config), "--out", str(out)], capture_output=True, text=True)
    # exit 1 is allowed: a stated constant may fail, the outputs must still be well formed
    if proc.returncode not in (0, 1):
        sys.exit(f"run exited {proc.returncode}: {proc.stderr}")

    lines = (out / "reports.ndjson").read_text().splitlines()
    if not lines:
        sys.exit("no reports written")
    for i, line in enumerate(lines, 1):
        errors = list(validator.iter_errors(json.loads(line)))
        if errors:
            sys.exit(f"reports.ndjson line {i}: {errors[0].message}")

    for name, columns in schema["x-csv-series"].items():
        with open(out / f"{name}.csv", newline="") as f:
            rows = list(csv.reader(f))
        if rows[0] != columns:
            sys.exit(f"{name}.csv header {rows[0]} != {columns}")
        if len(rows) < 2:
            sys.exit(f"{name}.csv has no rows")
        bad = [r for r in rows[1:] if len(r) != len(columns)]
        if bad:
            sys.exit(f"{name}.csv row with {len(bad[0])} fields: {bad[0]}")

    manifest = json.loads((out / "manifest.json").read_text())
    if manifest["exit_code"] != proc.returncode:
        sys.exit("manifest exit code disagrees with the process")
    print(f"{len(lines)} report lines valid, exit {proc.returncode}")


if __name__ == "__main__":
    main()
