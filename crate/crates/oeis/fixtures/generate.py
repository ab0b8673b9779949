"""Writes the offline b-file fixtures from closed formulas.

Each triangle is produced without the six-parameter recurrence so the
fixtures act as an independent reference. Output goes next to this file.
"""

import json
import os
from itertools import permutations
from math import comb, factorial

ROWS = 30


def surj(n, k):
    return sum((-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1))


def subset(n, k):
    return surj(n, k) // factorial(k)


def eulerian(n, k):
    if n == 0:
        return 1 if k == 0 else 0
    return sum((-1) ** j * comb(n + 1, j) * (k + 1 - j) ** n for j in range(k + 1))


def cycle_row(n):
    # coefficients of x (x + 1) ... (x + n - 1)
    row = [1]
    for j in range(n):
        nxt = [0] * (len(row) + 1)
        for i, c in enumerate(row):
            nxt[i] += j * c
            nxt[i + 1] += c
        row = nxt
    return row


def lah(n, k):
    if n == 0 or k == 0:
        return 1 if n == k else 0
    return comb(n - 1, k - 1) * factorial(n) // factorial(k)


def stirling_perm_ascents(n):
    # Stirling permutations of 1 1 2 2 .. n n by number of descents
    # (with a trailing 0), brute force for small n
    counts = [0] * (n + 1)
    for w in set(permutations([i for i in range(1, n + 1) for _ in range(2)])):
        ok = all(
            min(w[a + 1 : b]) > w[a] if b > a + 1 else True
            for a in range(len(w))
            for b in [max(i for i in range(len(w)) if w[i] == w[a])]
            if b > a
        )
        if ok:
            d = sum(1 for i in range(len(w)) if (w[i + 1] if i + 1 < len(w) else 0) < w[i])
            counts[d] += 1
    return counts


def second_eulerian_rows(rows):
    t = {(1, 1): 1}
    for n in range(2, rows + 1):
        for k in range(1, n + 1):
            t[n, k] = k * t.get((n - 1, k), 0) + (2 * n - k) * t.get((n - 1, k - 1), 0)
    for n in range(1, 6):
        assert stirling_perm_ascents(n)[1:] == [t[n, k] for k in range(1, n + 1)], n
    return lambda n, k: t[n, k]


second = second_eulerian_rows(ROWS)

# name -> (first row, first column, columns trimmed at the end, T(n, k))
TABLES = {
    "A173018": (0, 0, 0, eulerian),
    "A008292": (1, 1, 0, lambda n, k: eulerian(n, k - 1)),
    "A008517": (1, 1, 0, second),
    "A019538": (1, 1, 0, surj),
    "A008277": (1, 1, 0, subset),
    "A008297": (1, 1, 0, lambda n, k: (-1) ** n * lah(n, k)),
    "A105278": (1, 1, 0, lah),
    "A094587": (0, 0, 0, lambda n, k: factorial(n) // factorial(k)),
    "A008279": (0, 0, 0, lambda n, k: factorial(n) // factorial(n - k)),
    "A007318": (0, 0, 0, comb),
    "A132393": (0, 0, 0, lambda n, k: cycle_row(n)[k]),
    "A008275": (1, 1, 0, lambda n, k: (-1) ** (n - k) * cycle_row(n)[k]),
}

# six-parameter tuple and the layout mapping OEIS rows to |n k|
MANIFEST = {
    "A173018": ("0,1,1,1,-1,0", 0, 0, 0),
    "A008292": ("0,1,1,1,-1,0", 1, 0, 1),
    "A008517": ("0,1,1,2,-1,-1", 1, 0, 1),
    "A019538": ("0,1,0,0,1,0", 1, 1, 0),
    "A008277": ("0,1,0,0,0,1", 1, 1, 0),
    "A008297": ("-1,-1,1,0,0,-1", 1, 1, 0),
    "A105278": ("1,1,-1,0,0,1", 1, 1, 0),
    "A094587": ("1,-1,0,0,0,1", 0, 0, 0),
    "A008279": ("0,0,1,0,1,0", 0, 0, 0),
    "A007318": ("0,0,1,0,0,1", 0, 0, 0),
    "A132393": ("1,0,-1,0,0,1", 0, 0, 0),
    "A008275": ("-1,0,1,0,0,1", 1, 1, 0),
}


def main():
    os.chdir(os.path.dirname(os.path.abspath(__file__)))
    manifest = {}
    for anum, (n0, k0, trim, f) in TABLES.items():
        lines = [f"# {anum}: rows {n0}..{ROWS}, generated from closed formulas"]
        idx = n0
        for n in range(n0, ROWS + 1):
            for k in range(k0, n + 1 - trim):
                lines.append(f"{idx} {f(n, k)}")
                idx += 1
        fname = f"b{anum[1:]}.txt"
        with open(fname, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        params, row_offset, k_offset, k_trim = MANIFEST[anum]
        manifest[anum] = {
            "file": fname,
            "params": params,
            "layout": {"row_offset": row_offset, "k_offset": k_offset, "k_trim": k_trim},
        }
    with open("manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
