"""End-to-end checks of the hybrid-wlp command line: exit codes, JSON schema, determinism."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

EXE = pathlib.Path(sys.argv[1])
ROOT = pathlib.Path(sys.argv[2])
MODELS = ROOT / "models"
SCHEMA = json.loads((ROOT / "schema" / "report.schema.json").read_text())
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)

failures = []
scratch = tempfile.TemporaryDirectory()


def run(*args):
    p = subprocess.run([str(EXE), *map(str, args)], capture_output=True, text=True, timeout=120)
    return p.returncode, p.stdout, p.stderr


def check(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        failures.append(what)


def report(*args):
    code, out, err = run(*args, "--json")
    try:
        doc = json.loads(out)
    except json.JSONDecodeError:
        check(False, f"{' '.join(map(str, args))}: output is JSON ({err.strip()})")
        return code, None
    errors = sorted(VALIDATOR.iter_errors(doc), key=lambda e: e.path)
    check(not errors, f"{' '.join(map(str, args))}: matches schema" + (f" ({errors[0].message})" if errors else ""))
    return code, doc


def write(text):
    path = pathlib.Path(scratch.name) / f"case{len(list(pathlib.Path(scratch.name).iterdir()))}.hwl"
    path.write_text(text)
    return path


good = ["bouncing_ball", "bouncing_ball_dinv", "pendulum", "pendulum_flow", "drift"]
for name in good:
    code, doc = report("verify", MODELS / f"{name}.hwl")
    check(code == 0, f"verify {name} exits 0")
    if doc:
        check(doc["summary"]["exit_code"] == code, f"verify {name} summary agrees with exit code")
        check(doc["summary"]["proved"] == doc["summary"]["total"], f"verify {name} proves everything")

for name in ["ball_no_guard", "ball_no_bounce", "pendulum_radius"]:
    code, doc = report("verify", MODELS / "mutants" / f"{name}.hwl")
    check(code == 2, f"verify mutant {name} exits 2")
    if doc:
        refuted = [o for o in doc["obligations"] if o["verdict"] == "Refuted"]
        check(refuted and all("witness" in o for o in refuted), f"mutant {name} reports a witness")

# the ball with its postcondition flipped
ball = (MODELS / "bouncing_ball.hwl").read_text().replace("post 0 <= x & x <= h", "post x > h")
flipped = write(ball)
code, doc = report("verify", flipped)
check(code == 2, "flipped-post ball exits 2")
if doc:
    post = [o for o in doc["obligations"] if o["provenance"].startswith("loop-post")]
    check(post and post[0]["verdict"] == "Refuted", "flipped-post ball refutes the loop exit")
code, doc = report("falsify", flipped)
check(code == 2 and doc and doc["found"], "falsify finds the flipped-post ball")

opaque = write("problem open\nvars x\npre x = 0\npost x >= 0\nprogram\n  evolve x' = 1 & true on [0, inf)\n")
code, doc = report("verify", opaque)
check(code == 1, "evolve without flow or dinv exits 1")
if doc:
    check(any(o["kind"] == "opaque" and o["verdict"] == "Unknown" for o in doc["obligations"]), "opaque obligation stays Unknown")

code, _, err = run("verify", write("problem p vars x pre x = 0 post x = 0 program evolve x' ="))
check(code == 3 and "line 1" in err, "parse errors exit 3 with a position")
code, _, _ = run("verify", MODELS / "missing.hwl")
check(code == 3, "missing file exits 3")
code, _, _ = run("verify", MODELS / "pendulum.hwl", "--trials", "-4")
check(code == 3, "bad settings exit 3")

code, doc = report("certify", MODELS / "pendulum_flow.hwl", "--flow-only")
check(code == 0 and doc and all(o["kind"] == "flow-certificate" for o in doc["obligations"]), "certify --flow-only")
if doc:
    check(doc["obligations"] and doc["obligations"][0]["certificate"]["certified"], "pendulum flow certified")
code, doc = report("certify", MODELS / "bouncing_ball_dinv.hwl", "--dinv-only")
check(code == 0 and doc and all(o["kind"] == "diff-invariant" for o in doc["obligations"]), "certify --dinv-only")

code, doc = report("falsify", MODELS / "pendulum.hwl", "--trials", "200")
check(code == 0 and doc and not doc["found"], "falsify pendulum finds nothing")
code, doc = report("falsify", MODELS / "mutants" / "ball_no_guard.hwl")
check(code == 2 and doc and doc["found"], "falsify ball_no_guard finds a counterexample")

code, doc = report("laws", "--model", "rel", "--n", "2", "--mode", "exhaustive")
check(code == 0 and doc and doc["all_pass"], "laws rel n=2 exhaustive pass")
code, doc = report("laws", "--model", "rel", "--n", "2", "--law", "wrong.mul-comm")
check(code == 2 and doc and not doc["all_pass"], "a false law fails")
code, out, _ = run("laws", "--list")
check(code == 0 and "dioid.add-assoc" in out, "laws --list")

# determinism and settings precedence
a = run("verify", MODELS / "mutants" / "ball_no_guard.hwl", "--json", "--seed", "5")
b = run("verify", MODELS / "mutants" / "ball_no_guard.hwl", "--json", "--seed", "5")
check(a == b, "same seed, same report")
seeded = write((MODELS / "drift.hwl").read_text() + "\nconfig seed = 9\n")
_, doc = report("verify", seeded)
check(doc and doc["seed"] == 9, "file config overrides the default seed")
_, doc = report("verify", seeded, "--seed", "4")
check(doc and doc["seed"] == 4, "command line overrides file config")

# fmt output re-parses to the same verification result
for name in good:
    code, text, _ = run("fmt", MODELS / f"{name}.hwl")
    again = write(text)
    first = run("verify", MODELS / f"{name}.hwl", "--json")[1]
    second = run("verify", again, "--json")[1]
    check(code == 0 and first == second, f"fmt {name} round trips")

scratch.cleanup()
print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
