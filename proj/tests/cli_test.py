#!/usr/bin/env python3
"""Black-box checks of the infogen command line."""

import json
import os
import shutil
import subprocess
import sys
import tempfile
import unittest
import xml.dom.minidom
from pathlib import Path

BIN = Path(sys.argv.pop(1))
DATASET = Path(sys.argv.pop(1))
CONTENT = Path(sys.argv.pop(1))


def run(*args, env=None):
    return subprocess.run([str(BIN), *map(str, args)], capture_output=True, text=True, env=env)


class Cli(unittest.TestCase):
    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp(prefix="infogen-cli-"))

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def test_generate_writes_designs_and_report(self):
        out = self.tmp / "out"
        r = run("generate", "--content", CONTENT / "coffee.md", "--dataset", DATASET, "--canvas", "800x600",
                "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        svgs = sorted(out.glob("design_*.svg"))
        self.assertEqual([p.name for p in svgs], [f"design_{i:03d}.svg" for i in range(1, 6)])
        for p in svgs:
            self.assertEqual(xml.dom.minidom.parse(str(p)).documentElement.tagName, "svg")
        report = json.loads((out / "report.json").read_text())
        self.assertEqual(len(report), 5)
        for row in report:
            self.assertTrue(set(row["scores"]) >= {"e_o", "e_c", "u", "e_l", "tfidf", "p_style", "composite"})

    def test_generate_with_pivot_and_sketch(self):
        out = self.tmp / "out"
        r = run("generate", "--content", CONTENT / "climate.md", "--dataset", DATASET, "--pivot", "325,250,150,150",
                "--pivot-graphic", "globe", "--sketch", CONTENT / "wave_sketch.json", "--n", "3", "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        report = json.loads((out / "report.json").read_text())
        self.assertEqual(len(report), 3)
        self.assertTrue(all(row["scores"]["e_o"] == 1 and "sketch_distance" in row for row in report))

    def test_pivot_covering_everything_fails(self):
        r = run("generate", "--content", CONTENT / "coffee.md", "--dataset", DATASET, "--pivot", "0,0,800,600",
                "--out", self.tmp / "out")
        self.assertEqual(r.returncode, 2)
        self.assertIn("[layout]", r.stderr)
        self.assertIn("no layouts", r.stderr)

    def test_malformed_markdown_names_the_line(self):
        md = self.tmp / "bad.md"
        md.write_text("- title: a\n  colour: red\n")
        r = run("generate", "--content", md, "--dataset", DATASET, "--out", self.tmp / "out")
        self.assertEqual(r.returncode, 2)
        self.assertIn("[content]", r.stderr)
        self.assertIn("line 2", r.stderr)

    def test_missing_input_is_io(self):
        r = run("generate", "--content", self.tmp / "absent.md", "--dataset", DATASET, "--out", self.tmp / "out")
        self.assertEqual(r.returncode, 1)

    def test_build_index_is_byte_deterministic(self):
        copies = []
        for name in ("a", "b"):
            dst = self.tmp / name
            shutil.copytree(DATASET, dst)
            r = run("build-index", "--dataset", dst, "--seed", "0")
            self.assertEqual(r.returncode, 0, r.stderr)
            copies.append((dst / "manifest.json").read_bytes())
        self.assertEqual(copies[0], copies[1])
        self.assertEqual(copies[0], (DATASET / "manifest.json").read_bytes())

    def test_validate_lists_every_violation(self):
        dst = self.tmp / "broken"
        shutil.copytree(DATASET, dst)
        m = json.loads((dst / "manifest.json").read_text())
        m["layouts"][0]["points"][0] = [1.2, 0.5]
        m["palettes"][0]["colors"].append("#000")
        m["version"] = "one"
        (dst / "manifest.json").write_text(json.dumps(m))
        r = run("validate", "--dataset", dst)
        self.assertEqual(r.returncode, 2)
        for needle in ("/layouts/0/points/0", "/palettes/0/colors", "/version", "3 violation(s)"):
            self.assertIn(needle, r.stderr)
        self.assertEqual(run("validate", "--dataset", DATASET).returncode, 0)

    def test_rank_layouts_alpha_one_sorts_by_coverage(self):
        r = run("rank-layouts", "--dataset", DATASET, "--n-vgs", "5", "--alpha", "1", "--top-k", "50", "--json")
        self.assertEqual(r.returncode, 0, r.stderr)
        rows = json.loads(r.stdout)
        self.assertGreater(len(rows), 1)
        e_c = [row["e_c"] for row in rows]
        self.assertEqual(e_c, sorted(e_c, reverse=True))
        table = run("rank-layouts", "--dataset", DATASET, "--n-vgs", "5")
        self.assertTrue(table.stdout.split("\n")[0].split() == ["id", "e_o", "e_c", "u", "e_l"])

    def test_dataset_from_environment(self):
        env = dict(os.environ, INFOGEN_DATASET=str(DATASET))
        self.assertEqual(run("validate", env=env).returncode, 0)


if __name__ == "__main__":
    unittest.main(verbosity=2)
