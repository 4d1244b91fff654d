#!/usr/bin/env python3
"""Run a small campaign for every experiment through the CLI and validate each
summary JSON against the published schema. Usage: validate_summaries.py RTN SCHEMA WORKDIR"""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema

SMALL = {
    "mps_gap": dict(d=20, D=2),
    "peps_gap": dict(d=5, D=2, N=2),
    "peps_gap_independent": dict(d=5, D=2, N=2),
    "parent_gap_mps": dict(d=5, D=2, N=3),
    "parent_gap_peps": dict(d=5, D=1, N=2),
    "correlations": dict(d=50, D=2, N=8),
    "expander": dict(d=60, D=4),
    "wishart_check": dict(d=40, D=2),
    "overlap_check": dict(d=20, D=2),
    "trace_check": dict(d=40, D=2),
    "peps_cp_check": dict(d=20, D=2, N=2),
}


def main() -> int:
    rtn, schema_path, work = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    schema = json.loads(schema_path.read_text())
    validator = jsonschema.Draft202012Validator(schema)
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)

    configs = []
    for name, sizes in SMALL.items():
        configs.append(dict(experiment=name, trials=3, master_seed=11, output_dir=str(work / name), **sizes))
    configs.append(dict(experiment="mps_gap", d=10, D=2, trials=3, master_seed=11,
                        sweep={"param": "d", "values": [10, 40, 160]}, output_dir=str(work / "sweep")))

    failures = 0
    for i, cfg in enumerate(configs):
        cfg_path = work / f"config_{i}.json"
        cfg_path.write_text(json.dumps(cfg))
        proc = subprocess.run([rtn, "campaign", "--config", str(cfg_path)], capture_output=True, text=True)
        if proc.returncode not in (0, 3):
            print(f"FAIL {cfg['experiment']}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        summary_path = pathlib.Path(cfg["output_dir"]) / f"{cfg['experiment']}_summary.json"
        summary = json.loads(summary_path.read_text())
        errors = sorted(validator.iter_errors(summary), key=lambda e: list(e.path))
        for e in errors:
            print(f"FAIL {summary_path.name}: {'/'.join(map(str, e.path))}: {e.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {summary_path.name}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
