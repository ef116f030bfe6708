"""Runs a handful of CLI commands and validates each report against the schema."""
import json
import subprocess
import sys

import jsonschema

sgap, schema_path = sys.argv[1], sys.argv[2]
with open(schema_path) as fh:
    schema = json.load(fh)
validator = jsonschema.Draft202012Validator(schema)

runs = [
    (["bound", "--K", "0", "--n", "3", "--d", "1"], 0),
    (["bound", "--K", "1", "--n", "2", "--d", "3.14159265", "--model", "--s", "0.3"], 0),
    (["bound", "--K", "-1", "--n", "4", "--d", "2"], 0),
    (["model", "--R", "-1", "--l", "2", "--lambda", "0.5"], 0),
    (["verify", "--space", "interval", "--resolution", "200"], 0),
    (["verify", "--space", "sphere", "--resolution", "2", "--checks", "max"], 0),
    (["heat", "--space", "sphere", "--resolution", "2", "--pairs", "10", "--tsteps", "4"], 0),
]

failures = 0
for args, expected in runs:
    proc = subprocess.run([sgap, *args], capture_output=True, text=True)
    label = " ".join(args)
    if proc.returncode != expected:
        print(f"FAIL {label}: exit {proc.returncode}\n{proc.stderr}")
        failures += 1
        continue
    report = json.loads(proc.stdout)
    errors = list(validator.iter_errors(report))
    for e in errors:
        print(f"FAIL {label}: {e.json_path}: {e.message}")
    failures += bool(errors)
    if not errors:
        print(f"ok   {label}")

sys.exit(1 if failures else 0)
