"""End-to-end checks of the latslice executable: exit codes and files."""

import json
import os
import subprocess
import sys
import tempfile

EXE = sys.argv[1]
failures = []


def run(*args):
    return subprocess.run([EXE, *args], capture_output=True, text=True)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "out.csv")
    r = run("dim", "--gen", '{"kind":"parabolic_staircase"}', "--no-such-flag", "--out", out)
    check(r.returncode == 2, "unknown flag exits 2")
    check(not os.path.exists(out), "failed run leaves no output file")

    r = run("repro", "ff", "--p", "13")
    check(r.returncode == 0, "repro ff exits 0")

    pts = os.path.join(tmp, "stairs.txt")
    r = run("generate", "--kind", "parabolic_staircase", "--params", '{"M":32}', "--out", pts)
    check(r.returncode == 0 and os.path.getsize(pts) > 0, "generate writes a point file")

    r = run("dim", "--in", pts, "--scales", "dyadic:1024", "--out", out)
    check(r.returncode == 0, "dim from a file exits 0")
    with open(out) as f:
        check(f.readline().strip() == "scale,count,ratio", "dim writes the CSV header")

    reports = []
    for i in range(2):
        rep = os.path.join(tmp, f"r{i}.json")
        run("dim", "--in", pts, "--scales", "dyadic:1024", "--report", rep)
        with open(rep) as f:
            reports.append(json.load(f)["results"])
    check(reports[0] == reports[1], "results block is deterministic")

    r = run("validate", "--in", os.path.join(tmp, "missing.txt"))
    check(r.returncode == 4, "missing input exits 4")

sys.exit(1 if failures else 0)
