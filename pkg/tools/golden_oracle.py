"""Independent oracle for the fixture golden files.

Shares no code with the package: stdlib CSV parsing, numpy's SVD-based
``chebfit`` for the expansion, and compensated (``math.fsum``) direct
summation for cosines, Pearson correlations and the agreement statistic.

    python tools/golden_oracle.py tests/fixtures/panel tests/fixtures/golden --degree 30
"""

import argparse
import csv
import datetime as dt
import math
from pathlib import Path

from numpy.polynomial import chebyshev


def read(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    pts = sorted((dt.date.fromisoformat(r["date"]).toordinal(), float(r["close"])) for r in rows)
    return [t for t, _ in pts], [v for _, v in pts]


def cheb_coefficients(days, prices, degree):
    t0, t1 = days[0], days[-1]
    x = [(2.0 * t - (t0 + t1)) / (t1 - t0) for t in days]
    return [float(c) for c in chebyshev.chebfit(x, prices, degree)]


def cos_between(a, b):
    dot = math.fsum(p * q for p, q in zip(a, b))
    na = math.sqrt(math.fsum(p * p for p in a))
    nb = math.sqrt(math.fsum(q * q for q in b))
    return max(-1.0, min(1.0, dot / (na * nb)))


def pearson(a, b):
    n = len(a)
    ma, mb = math.fsum(a) / n, math.fsum(b) / n
    sab = math.fsum((p - ma) * (q - mb) for p, q in zip(a, b))
    saa = math.fsum((p - ma) ** 2 for p in a)
    sbb = math.fsum((q - mb) ** 2 for q in b)
    return max(-1.0, min(1.0, sab / math.sqrt(saa * sbb)))


def returns(p):
    return [(p[i + 1] - p[i]) / p[i] for i in range(len(p) - 1)]


def fmt(v):
    s = "%.3f" % v
    return "0.000" if s == "-0.000" else s


def write_matrix(path, labels, rows):
    out = ["asset," + ",".join(labels)]
    for lab, row in zip(labels, rows):
        out.append(lab + "," + ",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("panel", type=Path)
    ap.add_argument("out", type=Path)
    ap.add_argument("--degree", type=int, default=30)
    ap.add_argument("--basis", choices=("prices", "returns"), default="prices")
    args = ap.parse_args()

    files = sorted(args.panel.glob("*.csv"))
    labels = [f.stem for f in files]
    data = [read(f) for f in files]
    if any(d[0] != data[0][0] for d in data):
        raise SystemExit("fixture series must share one date grid")
    coeffs = [cheb_coefficients(t, p, args.degree) for t, p in data]
    obs = [p if args.basis == "prices" else returns(p) for _, p in data]

    m = len(labels)
    cos = [[1.0 if i == j else cos_between(coeffs[i], coeffs[j]) for j in range(m)] for i in range(m)]
    cor = [[1.0 if i == j else pearson(obs[i], obs[j]) for j in range(m)] for i in range(m)]
    upper = [(i, j) for i in range(m) for j in range(i + 1, m)]
    stat = pearson([cos[i][j] for i, j in upper], [cor[i][j] for i, j in upper])

    args.out.mkdir(parents=True, exist_ok=True)
    write_matrix(args.out / "cosine.csv", labels, cos)
    write_matrix(args.out / "correlation.csv", labels, cor)
    (args.out / "agreement.txt").write_text("%.10f\n" % stat, encoding="utf-8")
    print(f"agreement {stat!r}")


if __name__ == "__main__":
    main()
