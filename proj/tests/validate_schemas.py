#!/usr/bin/env python3
"""Run the CLI over a spread of invocations and validate every JSON output
against the published schema for its subcommand."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

CASES = [
    ["primes", "--limit", "100"],
    ["primes", "--limit", "100", "--count-only"],
    ["symbol", "--d", "5", "--n", "2"],
    ["symbol", "--d", "-4", "--n", "3", "--kind", "legendre"],
    ["sieve2sq", "--limit", "50", "--list"],
    ["sieve2sq", "--limit", "50"],
    ["gaps2sq", "--limit", "1000"],
    ["bambah-chowla", "--limit", "100", "--beta", "1/2"],
    ["bambah-chowla", "--limit", "10000", "--beta", "3", "--from", "100"],
    ["gaps3sq", "--limit", "10000"],
    ["construct-gap", "--D", "-4", "--h", "3"],
    ["construct-gap", "--D=-4,-3", "--h", "2"],
    ["annulus-enum", "--lambda", "25", "--kappa", "5/2"],
    ["annulus-enum", "--lambda", "3", "--kappa", "0"],
    ["shell-enum", "--m", "2758", "--h", "0"],
    ["annulus-search", "--C", "1", "--s", "1/5", "--d", "1", "--mu", "400"],
    ["annulus-search", "--C", "1", "--s", "1/5", "--d", "2", "--mu", "1000", "--mu-to", "1010"],
    ["prop23", "--lambda", "10000", "--alpha", "6"],
    ["prop26", "--m", "10000", "--C", "12"],
    ["thm25", "--d", "1", "--h", "1"],
    ["thm25", "--d", "1", "--h", "2"],
]


def main() -> int:
    exe, schema_dir = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    for s in schemas.values():
        jsonschema.Draft202012Validator.check_schema(s)

    failures = 0
    checked = 0

    def check(name, doc, label):
        nonlocal failures, checked
        errors = list(jsonschema.Draft202012Validator(schemas[name]).iter_errors(doc))
        checked += 1
        if errors:
            failures += 1
            print(f"FAIL {label}: {errors[0].message} at {list(errors[0].absolute_path)}")

    def run(args):
        p = subprocess.run([str(exe), *args], capture_output=True, text=True)
        return p.returncode, p.stdout

    for args in CASES:
        code, out = run(args)
        if code not in (0, 1):
            failures += 1
            print(f"FAIL {' '.join(args)}: exit {code}")
            continue
        check(args[0], json.loads(out), " ".join(args))

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        cert, manifest = tmp / "cert.json", tmp / "run.manifest.json"
        run(["construct-gap", "--D", "-4", "--h", "2", "--out", str(cert), "--manifest", str(manifest)])
        check("manifest", json.loads(manifest.read_text()), "manifest")
        check("construct-gap", json.loads(cert.read_text()), "construct-gap --out")

        code, out = run(["verify-gap", "--cert", str(cert), "--oracle"])
        doc = json.loads(out)
        check("verify-gap", doc, "verify-gap")
        check("witness-table", doc["witnesses"], "witness table")

        bad = json.loads(cert.read_text())
        bad["m"] = str(int(bad["m"]) + 1)
        (tmp / "bad.json").write_text(json.dumps(bad))
        code, out = run(["verify-gap", "--cert", str(tmp / "bad.json")])
        check("verify-gap", json.loads(out), "verify-gap (tampered)")

        code, out = run(["replay", str(manifest)])
        check("replay", json.loads(out), "replay")

    print(f"{checked} documents checked, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
