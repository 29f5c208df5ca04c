"""Exit-code and output checks for the ddeverify command line."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

cli, root = sys.argv[1], Path(sys.argv[2])
scen = root / "scenarios"
failures = []


def run(*args):
    return subprocess.run([cli, *map(str, args)], capture_output=True, text=True)


def expect(label, args, code, needle=None, stream="stdout"):
    r = run(*args)
    out = getattr(r, stream)
    ok = r.returncode == code and (needle is None or needle in out)
    print(f"{'ok  ' if ok else 'FAIL'} {label}: exit {r.returncode}")
    if not ok:
        failures.append(label)
        print(r.stdout, r.stderr, sep="\n")
    return r


expect("switch compliant", ["verify", "--scenario", scen / "trolley_switch.dde"], 0)
expect("push non-compliant", ["verify", "--scenario", scen / "trolley_push.dde"], 1, "F4")
expect("push under dte", ["verify", "--scenario", scen / "trolley_push.dde", "--mode", "dte"], 0)
expect("strips switch", ["strips-verify", "--scenario", scen / "trolley_switch.strips"], 0)
expect("strips push", ["strips-verify", "--scenario", scen / "trolley_push.strips"], 1, "F4")
expect("missing file", ["verify", "--scenario", scen / "nope.dde"], 2)
expect("unknown flag", ["verify", "--scenario", scen / "trolley_switch.dde", "--bogus"], 2)

with tempfile.TemporaryDirectory() as tmp:
    bad = Path(tmp) / "bad.dde"
    bad.write_text("(SIGNATURE)\n")
    expect("malformed scenario", ["verify", "--scenario", bad], 2, f"{bad}:", stream="stderr")

    dump = Path(tmp) / "trace.txt"
    expect("trace dump", ["verify", "--scenario", scen / "trolley_switch.dde", "--trace-dump", dump], 0)
    if "(dead P3)" not in dump.read_text():
        failures.append("trace dump content")
        print("FAIL trace dump content")

goal = "(I I now (and (not (exists ((t Moment)) (holds (dead P1) t))) (not (exists ((t Moment)) (holds (dead P2) t)))))"
expect("prove intention", ["prove", "--scenario", scen / "trolley_switch.dde", "--goal", goal], 0, "R14")
expect("prove resource-out", ["prove", "--scenario", scen / "trolley_switch.dde", "--goal", "(holds (dead P1) 0)", "--budget", "2000"], 3)
expect("fo prover rejects modal axioms", ["prove", "--scenario", scen / "trolley_switch.dde", "--fo", "--goal", "(holds (dead P1) 0)", "--budget", "2000"], 2)

r = expect("simulate json", ["simulate", "--scenario", scen / "trolley_switch.dde", "--format", "json"], 0)
try:
    json.loads(r.stdout)
except ValueError:
    failures.append("simulate json parses")

r = expect("sweep", ["sweep", "--scenario", scen / "trolley_switch.dde", "--format", "json"], 1)
cells = json.loads(r.stdout)["cells"]
if len(cells) != 10 or not any(c["verdict"]["compliant"] for c in cells):
    failures.append("sweep cells")
    print("FAIL sweep cells")

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
