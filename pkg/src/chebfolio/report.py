"""Deterministic serialization of run results and atomic file output."""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from chebfolio.similarity import AgreementReport, LabeledMatrix


def display3(v: float) -> str:
    """Three-decimal display form; negative zero prints as ``0.000``."""
    s = f"{float(v):.3f}"
    return "0.000" if s == "-0.000" else s


def format_agreement(stat: float) -> str:
    return f"{float(stat):.10f}\n"


def matrix_to_csv(m: LabeledMatrix) -> str:
    lines = [",".join(["asset", *m.labels])]
    for lab, row in zip(m.labels, m.entries):
        lines.append(",".join([lab, *(display3(v) for v in row)]))
    return "\n".join(lines) + "\n"


def parse_matrix_csv(text: str) -> LabeledMatrix:
    rows = [r.split(",") for r in text.strip().splitlines()]
    labels = tuple(rows[0][1:])
    if tuple(r[0] for r in rows[1:]) != labels:
        raise ValueError("row labels do not match column labels")
    return LabeledMatrix(labels, np.array([[float(x) for x in r[1:]] for r in rows[1:]]))


def coefficients_to_csv(coefficients) -> str:
    lines = ["index,coefficient"]
    lines += [f"{k},{float(c)!r}" for k, c in enumerate(coefficients)]
    return "\n".join(lines) + "\n"


def _jsonable(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def to_json(obj) -> str:
    """JSON with shortest round-trip floats; infinities become strings."""
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def matrix_dict(m: LabeledMatrix) -> dict:
    return {"labels": list(m.labels), "entries": m.entries.tolist()}


@dataclass
class RunReport:
    config_echo: dict
    per_asset: list
    cosine_matrix: LabeledMatrix
    correlation_matrix: LabeledMatrix
    agreement: AgreementReport | None
    agreement_error: str | None = None
    alignment: dict = field(default_factory=dict)
    capm: list | None = None

    def to_dict(self) -> dict:
        if self.agreement is not None:
            agreement = {
                "statistic": self.agreement.statistic,
                "pair_count": self.agreement.pair_count,
            }
        else:
            agreement = {"error": self.agreement_error}
        return {
            "config_echo": self.config_echo,
            "alignment": self.alignment,
            "per_asset": self.per_asset,
            "cosine_matrix": matrix_dict(self.cosine_matrix),
            "correlation_matrix": matrix_dict(self.correlation_matrix),
            "agreement": agreement,
            "capm": None if self.capm is None else [vars(e) for e in self.capm],
        }


def capm_to_csv(estimates) -> str:
    lines = ["asset_id,beta,phi,expected_return_beta,expected_return_phi"]
    for e in estimates:
        lines.append(
            f"{e.asset_id},{e.beta!r},{e.phi!r},{e.expected_return_beta!r},{e.expected_return_phi!r}"
        )
    return "\n".join(lines) + "\n"


def write_outputs(outdir, files: dict) -> list[Path]:
    """Write ``{name: text}`` into ``outdir``, each via temp file and rename.

    All contents are produced before this is called, so a failing run
    leaves nothing behind.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in files.items():
        target = outdir / name
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        written.append(target)
    return written
