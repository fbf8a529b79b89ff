#!/usr/bin/env python3
"""Replays the console transcripts of Markdown documents against the CLI.

Every ```console block is a sequence of commands. A line starting with
"$ dfd" is a command; the lines up to the next command are its expected
output (stdout, then stderr). A final "[exit N]" line gives the expected exit
status, which is 0 when the line is absent. All blocks of one document run in
one scratch directory that contains a link to the fixtures directory.
"""

import argparse
import os
import re
import shlex
import subprocess
import sys
import tempfile

EXIT_RE = re.compile(r"^\[exit (\d+)\]$")


def blocks(text):
    inside = False
    current = []
    for line in text.splitlines():
        if not inside and line.strip() == "```console":
            inside = True
            current = []
        elif inside and line.strip() == "```":
            inside = False
            yield current
        elif inside:
            current.append(line)


def commands(block):
    cmd = None
    for line in block:
        if line.startswith("$ "):
            if cmd is not None:
                yield cmd
            cmd = [line[2:], []]
        elif cmd is not None:
            cmd[1].append(line)
    if cmd is not None:
        yield cmd


def run_document(path, dfd, source_dir):
    with open(path, encoding="utf-8") as f:
        text = f.read()
    failures = 0
    count = 0
    with tempfile.TemporaryDirectory() as work:
        os.symlink(os.path.join(source_dir, "fixtures"),
                   os.path.join(work, "fixtures"))
        for block in blocks(text):
            for line, expected in commands(block):
                count += 1
                code = 0
                if expected and EXIT_RE.match(expected[-1]):
                    code = int(EXIT_RE.match(expected[-1]).group(1))
                    expected = expected[:-1]
                argv = shlex.split(line)
                if not argv or argv[0] != "dfd":
                    print(f"{path}: not a dfd command: {line}")
                    failures += 1
                    continue
                proc = subprocess.run([dfd] + argv[1:], cwd=work,
                                      capture_output=True, text=True,
                                      timeout=300)
                got = (proc.stdout + proc.stderr).rstrip("\n").splitlines()
                got = [g.rstrip() for g in got]
                want = [e.rstrip() for e in expected]
                while want and not want[-1]:
                    want.pop()
                if got != want or proc.returncode != code:
                    failures += 1
                    print(f"FAIL {path}: $ {line}")
                    print(f"  expected exit {code}, got {proc.returncode}")
                    print("  expected output:")
                    for w in want:
                        print(f"    {w}")
                    print("  actual output:")
                    for g in got:
                        print(f"    {g}")
    print(f"{path}: {count - failures}/{count} transcript commands match")
    return failures


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dfd", required=True)
    ap.add_argument("--source-dir", required=True)
    ap.add_argument("documents", nargs="+")
    args = ap.parse_args()
    failures = sum(run_document(d, os.path.abspath(args.dfd),
                                os.path.abspath(args.source_dir))
                   for d in args.documents)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
