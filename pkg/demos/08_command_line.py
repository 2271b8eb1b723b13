"""The command-line front end, driven from Python.

Each subcommand writes CSV plus a manifest.json with SHA-256 digests, so a
rerun can be checked for bit-identical output.
"""

import json
import tempfile
from pathlib import Path

from wavelife.cli import main

work = Path(tempfile.mkdtemp(prefix="wavelife-demo-"))
cfg = work / "run.yaml"
cfg.write_text("p: 2\na: -1\nepsilon: 0.3\ngrid:\n  h: 0.05\n  T: 40\n")

main(["blowup-time", "--p", "2", "--a", "-1", "--R", "1", "--geps", "0.1", "--ode-check"])
main(["sweep", "--config", str(cfg), "--eps", "0.5,0.4,0.3", "--out", str(work / "table.csv")])
main(["fit", "--in", str(work / "table.csv"), "--law", "power", "--p", "2", "--a", "-1"])
for name in ("table.manifest.json", "table_fit.manifest.json"):
    print(name, json.loads((work / name).read_text())["outputs"])
print("outputs in", work)
