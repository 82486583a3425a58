"""Runs every CLI command with --format json and validates the output against
schemas/cli-output.schema.json. Each command runs twice; output must match
byte for byte in every format."""

import json
import subprocess
import sys

import jsonschema

BINARY, SCHEMA = sys.argv[1], sys.argv[2]

COMMANDS = [
    ["dissect", "min", "--shape", "l-tromino", "--model", "single-split"],
    ["dissect", "min", "--shape", "u-pentomino", "--model", "full-line"],
    ["dissect", "min", "--shape", "2x2", "--model", "global-line"],
    ["dissect", "greedy", "--shape", "u-pentomino"],
    ["dissect", "survey", "--nmax", "4", "--model", "full-line"],
    ["survey", "--nmax", "5", "--model", "full-line", "--jobs", "2"],
    ["monty", "exact"],
    ["monty", "exact", "--strategy", "stay"],
    ["monty", "simulate", "--trials", "20000", "--seed", "7", "--jobs", "3"],
    ["birthday", "--n", "23", "--formula", "approx"],
    ["birthday", "--n", "23"],
    ["birthday", "--threshold", "0.5"],
    ["birthday", "--nmax", "30", "--trials", "2000", "--seed", "5"],
    ["hanoi", "--n", "4"],
    ["queens", "--n", "6"],
    ["queens", "--n", "3"],
    ["knight", "--rows", "5", "--cols", "5", "--start", "0,0"],
    ["knight", "--rows", "3", "--cols", "3"],
    ["domination", "--n", "5"],
    ["magic"],
]


def run(argv):
    done = subprocess.run([BINARY, *argv], capture_output=True, check=False)
    if done.returncode != 0:
        raise SystemExit(f"FAIL {' '.join(argv)}: exit {done.returncode}\n{done.stderr.decode()}")
    return done.stdout


def main():
    with open(SCHEMA) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for argv in COMMANDS:
        for fmt in ("text", "csv", "json"):
            full = argv + ["--format", fmt]
            first, second = run(full), run(full)
            if first != second:
                print(f"FAIL nondeterministic output: {' '.join(full)}")
                failures += 1
            if fmt != "json":
                continue
            doc = json.loads(first)
            errors = list(validator.iter_errors(doc))
            if errors:
                print(f"FAIL schema: {' '.join(full)}: {errors[0].message}")
                failures += 1
            # The schema must actually constrain: a document without its
            # command-specific fields is rejected.
            if validator.is_valid({"command": doc["command"]}):
                print(f"FAIL schema accepts a bare {doc['command']!r} document")
                failures += 1
    print(f"{len(COMMANDS)} commands checked, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
