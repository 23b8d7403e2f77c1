"""Runs every CLI subcommand with --report and validates the output against docs/report.schema.json."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    cli, schema_path, data = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        graph = tmp / "g.txt"
        weighted = tmp / "w.txt"
        weighted.write_text("".join(f"{u} {v} {1 + (u * v) % 7}\n" for u in range(14) for v in range(u + 1, 14)))
        runs = {
            "gen": ["gen", "--model", "gnp", "--n", "14", "--p", "0.6", "--out", str(graph)],
            "gen_hidden": ["gen", "--model", "hidden-matching", "--n", "64", "--clique-size", "8", "--cliques", "8", "--t", "2", "--out", str(tmp / "h.txt")],
            "cost": ["cost", "--graph", str(data / "k4.txt"), "--tree", "((0,1),(2,3))"],
            "cost_exact": ["cost", "--exact", "--graph", str(data / "k4.txt"), "--tree", "((0,1),(2,3))"],
            "sparsify": ["sparsify", "--graph", str(graph), "--eps", "0.5", "--delta", "0.3"],
            "sparsify_weighted": ["sparsify", "--graph", str(weighted), "--eps", "0.25"],
            "hc": ["hc", "--graph", str(graph), "--eps", "0.5"],
            "hc_empty": ["hc", "--graph", str(data / "blank.txt")],
            "hc_weighted": ["hc", "--graph", str(weighted), "--eps", "0.25"],
            "stream": ["stream", "--n", "6", "--input", str(data / "k4_stream.txt")],
            "mpc2": ["mpc", "--rounds", "2", "--k", "3", "--input", str(graph)],
            "mpc1": ["mpc", "--rounds", "1", "--branch", "dense", "--k", "2", "--input", str(graph)],
            "mpc1_sparse": ["mpc", "--rounds", "1", "--k", "2", "--input", str(graph)],
            "bench": ["bench", "--n", "40", "--seeds", "2"],
        }
        failures = 0
        for name, args in runs.items():
            report = tmp / f"{name}.json"
            proc = subprocess.run([cli, "--seed", "5", "--report", str(report), *args], capture_output=True, text=True)
            if proc.returncode != 0:
                print(f"{name}: exit {proc.returncode}\n{proc.stderr}")
                failures += 1
                continue
            errors = list(validator.iter_errors(json.loads(report.read_text())))
            for e in errors:
                print(f"{name}: {e.message} at {list(e.absolute_path)}")
            failures += bool(errors)
            print(f"{name}: {'ok' if not errors else 'INVALID'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
