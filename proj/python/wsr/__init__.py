"""Weighted proper scoring rules for ensemble forecasts.

Univariate scores take an observation and a list of members; multivariate
scores take a d-vector and an m x d list of members. Scores whose weight
mass is undefined come back as NaN.
"""

from ._wsr import (
    WsrError,
    clogs,
    crps,
    es,
    logs,
    mmds,
    owcrps,
    owes,
    owmmds,
    owvs,
    silverman_bandwidth,
    threshold_curve,
    twcrps,
    twes,
    twmmds,
    twvs,
    vs,
)

__all__ = [
    "WsrError",
    "clogs",
    "crps",
    "es",
    "logs",
    "mmds",
    "owcrps",
    "owes",
    "owmmds",
    "owvs",
    "silverman_bandwidth",
    "threshold_curve",
    "twcrps",
    "twes",
    "twmmds",
    "twvs",
    "vs",
]
