"""
Sweeping the level
==================

Run the CLI sweep over prime levels, then watch the normalized elliptic
term and the scaling ratio shrink as the norm grows.
"""

import csv
import math
import tempfile
from pathlib import Path

from tracebound import cli

out = Path(tempfile.mkdtemp()) / "sweep.csv"
cli.main(["sweep", "--field", "Q", "--a", "1.0", "--norms", "primes:1000-1300", "--out", str(out), "-j", "4"])

with open(out, newline="") as fh:
    rows = list(csv.DictReader(fh))
print(f"{len(rows)} rows written to {out}")
for row in rows[::8]:
    A = int(row["A"])
    print(f"A = {A}: A^(1/2) S_ell = {math.sqrt(A) * float(row['S_ell']):.4e}, ratio = {float(row['ratio']):.4e}")
