"""Runs the CLI on the bundled fixture and validates every JSON output
against the schemas in docs/schemas."""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def run(cli, *args):
    proc = subprocess.run([cli, "--threads", "1", *args], capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"{' '.join(args)} failed ({proc.returncode}): {proc.stderr.strip()}")


def main():
    cli, schema_dir, fixture = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    schemas = {p.name.split(".")[0]: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    for s in schemas.values():
        jsonschema.Draft202012Validator.check_schema(s)

    work = Path(tempfile.mkdtemp(prefix="rxcoord_schema_"))
    try:
        traj, prop = str(fixture / "trajectory.xyz"), str(fixture / "property.csv")
        run(cli, "scan", "-t", traj, "-p", prop, "-o", str(work))
        run(cli, "rank", "-t", traj, "--representation", str(work / "representation.json"), "-o", str(work), "-k", "3")
        run(cli, "network", "-t", traj, "--ranking", str(work / "ranking.csv"), "-p", prop, "-o", str(work), "-k", "4")
        shutil.copy(prop, work / "property.csv")
        run(cli, "report", "--run", str(work))

        checked = 0
        for name in ("representation", "network", "report"):
            doc = json.loads((work / f"{name}.json").read_text())
            jsonschema.validate(doc, schemas[name], cls=jsonschema.Draft202012Validator)
            checked += 1
            broken = dict(doc)
            broken.pop(next(iter(doc)))
            try:
                jsonschema.validate(broken, schemas[name], cls=jsonschema.Draft202012Validator)
            except jsonschema.ValidationError:
                pass
            else:
                sys.exit(f"{name} schema accepted a document with a missing key")
        report = json.loads((work / "report.json").read_text())
        for section in ("scan", "representation", "ranking", "network"):
            if section not in report:
                sys.exit(f"report.json lacks the {section} section")
        print(f"validated {checked} documents")
    finally:
        shutil.rmtree(work)


if __name__ == "__main__":
    main()
