"""Seeded synthetic corpus: noisy sine carriers with injected anomalies.

Each series draws from its own child of ``SeedSequence(seed)``, so series i
is the same whatever ``n_series`` is. Per series, in this order:

* period ~ U(16, 128), amplitude ~ U(0.5, 2), phase ~ U(0, 2 pi),
  noise sd ~ U(0.05, 0.2) * amplitude;
* values = amplitude * sin(2 pi t / period + phase) + N(0, noise sd);
* sigma = std of those values (population);
* 1 to 3 anomalies, each a spike or a level shift with equal probability:
  spike: one point at a uniform position, offset by +/- U(3, 8) * sigma;
  level shift: a segment of length U{max(2, m // 200) .. max(3, m // 100)}
  at a uniform start, offset by +/- U(3, 8) * sigma.

Injected points are labeled 1. At most 3 * max(3, m // 100) points are
anomalous, which keeps the contamination rate below 0.05 for every m >= 512.
"""

from __future__ import annotations

import math

import numpy as np

from featad.series_io import TimeSeries

MIN_LENGTH = 512


def _one_series(rng: np.random.Generator, m: int) -> tuple[np.ndarray, np.ndarray, list[dict]]:
    period = rng.uniform(16.0, 128.0)
    amplitude = rng.uniform(0.5, 2.0)
    phase = rng.uniform(0.0, 2.0 * math.pi)
    noise_sd = rng.uniform(0.05, 0.2) * amplitude
    t = np.arange(m, dtype=np.float64)
    values = amplitude * np.sin(2.0 * math.pi * t / period + phase) + rng.normal(0.0, noise_sd, m)
    sigma = float(values.std())
    labels = np.zeros(m, dtype=np.int8)
    injected = []

    for _ in range(int(rng.integers(1, 4))):
        kind = "spike" if rng.random() < 0.5 else "level_shift"
        magnitude = rng.uniform(3.0, 8.0) * sigma * (1.0 if rng.random() < 0.5 else -1.0)
        if kind == "spike":
            start, length = int(rng.integers(0, m)), 1
        else:
            length = int(rng.integers(max(2, m // 200), max(3, m // 100) + 1))
            start = int(rng.integers(0, m - length + 1))
        values[start : start + length] += magnitude
        labels[start : start + length] = 1
        injected.append({"kind": kind, "start": start, "length": length, "magnitude": magnitude})
    return values, labels, injected


def synth_corpus(seed: int, n_series: int, m: int) -> list[TimeSeries]:
    if n_series < 1:
        raise ValueError(f"n_series must be >= 1, got {n_series}")
    if m < MIN_LENGTH:
        raise ValueError(f"m must be >= {MIN_LENGTH}, got {m}")
    children = np.random.SeedSequence(seed).spawn(n_series)
    corpus = []
    for i, child in enumerate(children):
        values, labels, injected = _one_series(np.random.default_rng(child), m)
        corpus.append(
            TimeSeries(
                id=f"synth_s{seed}_{i:03d}",
                values=values,
                labels=labels,
                source="",
                metadata={"anomalies": injected},
            )
        )
    return corpus
