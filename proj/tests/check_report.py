"""Runs verify with --json and validates the report against the schema."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

verify, schema_path, data_dir = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
schema = json.loads(schema_path.read_text())


def run(*args):
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "report.json"
        proc = subprocess.run([verify, *args, "--json", str(out)], capture_output=True, text=True)
        report = json.loads(out.read_text())
    jsonschema.validate(report, schema)
    return proc, report


proc, report = run("--suite", str(data_dir / "mixed.qid"))
status = {r["name"]: r["status"] for r in report}
assert status == {"euler": "PASS", "off-by-one[u=q^(1/2)]": "FAIL", "divergent": "SKIP"}, status
assert proc.returncode == 1, proc.returncode
bad = next(r for r in report if r["status"] == "FAIL")
assert bad["firstMismatch"]["exponent"] == 7 and bad["firstMismatch"]["q"] == "7/2", bad
assert "NonSummable" in next(r for r in report if r["status"] == "SKIP")["reason"]

proc, report = run("--filter", "section5", "--jobs", "2")
assert proc.returncode == 0, proc.stdout + proc.stderr
assert sorted(r["name"] for r in report) == sorted(["capparelli", "tsf", "tsc", "tse", "ntss"])
assert all(r["status"] == "PASS" for r in report)

proc, report = run("--filter", "kc*", "--order", "20", "--strict")
assert proc.returncode == 0 and len(report) == 5, proc.stdout
assert all(r["provenOrder"] == 20 for r in report)

print("report schema checks passed")
