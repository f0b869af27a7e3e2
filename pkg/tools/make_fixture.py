"""Generate the committed 8-asset fixture panel (run once; output is committed).

One-factor geometric random walks on 250 weekdays starting 2021-01-04.
"""

import datetime as dt
from pathlib import Path

import numpy as np

SEED = 20210104
N_DAYS = 250
# ticker: (start price, market loading, idiosyncratic daily vol)
ASSETS = {
    "MKT": (1200.0, 1.0, 0.000),
    "ALFA": (512.0, 1.3, 0.012),
    "BRVO": (87.5, 0.6, 0.010),
    "CHRL": (1030.0, -0.4, 0.014),
    "DLTA": (245.0, 0.9, 0.006),
    "ECHO": (38.2, 0.0, 0.015),
    "FOXT": (660.0, 1.8, 0.020),
    "GOLF": (150.0, -1.1, 0.008),
}
DRIFT = {"ALFA": 4e-4, "CHRL": -3e-4, "ECHO": 6e-4, "GOLF": 2e-4}


def weekdays(start, n):
    out, d = [], start
    while len(out) < n:
        if d.weekday() < 5:
            out.append(d)
        d += dt.timedelta(days=1)
    return out


def main(outdir=Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "panel"):
    rng = np.random.default_rng(SEED)
    dates = weekdays(dt.date(2021, 1, 4), N_DAYS)
    market = 0.011 * rng.standard_normal(N_DAYS - 1) + 2e-4
    outdir.mkdir(parents=True, exist_ok=True)
    for ticker, (p0, load, vol) in ASSETS.items():
        r = load * market + vol * rng.standard_normal(N_DAYS - 1) + DRIFT.get(ticker, 0.0)
        prices = p0 * np.exp(np.concatenate([[0.0], np.cumsum(r)]))
        lines = ["date,close"] + [f"{d.isoformat()},{p:.2f}" for d, p in zip(dates, prices)]
        (outdir / f"{ticker}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
