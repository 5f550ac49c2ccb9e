"""Biterm topic model for short texts.

Trains with collapsed Gibbs sampling over per-biterm topic assignments:

    P(z_b = k | z_-b)  ∝  (n_k + α) · (n_wi|k + β)(n_wj|k + β) / (n_·|k + Vβ)²

where n_·|k counts word slots (two per biterm). Parameters are read from
the final sampler state — no averaging — so a (corpus, K, α, β,
iterations, seed) tuple is bit-reproducible.

Inference:
    P(z|b)  = θ_z φ_wi|z φ_wj|z / Σ_z' θ_z' φ_wi|z' φ_wj|z'
    p(b|d)  = n_d(b) / Σ_b n_d(b)
    P(z|d)  = Σ_b P(z|b) p(b|d)
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

MODEL_FORMAT = "btm-model"
MODEL_VERSION = 1


@dataclass(frozen=True, order=True)
class Biterm:
    wi: int
    wj: int

    def __post_init__(self):
        # canonical unordered form: wi <= wj
        if self.wi > self.wj:
            wi, wj = self.wj, self.wi
            object.__setattr__(self, "wi", wi)
            object.__setattr__(self, "wj", wj)


def extract_biterms(indices: Sequence[int]) -> list[Biterm]:
    """All unordered distinct-position pairs; the whole doc is the context window."""
    out = []
    n = len(indices)
    for i in range(n):
        for j in range(i + 1, n):
            out.append(Biterm(indices[i], indices[j]))
    return out


@dataclass
class BtmModel:
    k: int
    alpha: float
    beta: float
    seed: int
    vocab: list[str]
    theta: list[float]
    phi: list[list[float]]
    _word_index: dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self._word_index:
            self._word_index = {w: i for i, w in enumerate(self.vocab)}

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def word_id(self, word: str) -> Optional[int]:
        return self._word_index.get(word)

    def doc_indices(self, tokens: Sequence[str]) -> list[int]:
        """Map tokens into the vocabulary, dropping out-of-vocabulary ones."""
        return [self._word_index[t] for t in tokens if t in self._word_index]


def build_vocab(token_docs: Sequence[Sequence[str]]) -> list[str]:
    return sorted({t for doc in token_docs for t in doc})


def train(
    biterms: Sequence[Biterm],
    vocab: Sequence[str],
    k: int,
    alpha: Optional[float] = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
) -> BtmModel:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not biterms:
        raise ValueError("cannot train on an empty biterm set")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if alpha is None:
        alpha = 50.0 / k
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    v = len(vocab)
    for b in biterms:
        if not (0 <= b.wi < v and 0 <= b.wj < v):
            raise ValueError(f"biterm {b} outside vocabulary of size {v}")

    rng = random.Random(seed)
    n_z = np.zeros(k, dtype=np.float64)
    n_wz = np.zeros((k, v), dtype=np.float64)
    assignment = []
    for b in biterms:
        z = rng.randrange(k)
        assignment.append(z)
        n_z[z] += 1
        n_wz[z, b.wi] += 1
        n_wz[z, b.wj] += 1

    vbeta = v * beta
    for _ in range(iterations):
        for idx, b in enumerate(biterms):
            z = assignment[idx]
            n_z[z] -= 1
            n_wz[z, b.wi] -= 1
            n_wz[z, b.wj] -= 1
            scores = (
                (n_z + alpha)
                * (n_wz[:, b.wi] + beta)
                * (n_wz[:, b.wj] + beta)
                / (2.0 * n_z + vbeta) ** 2
            ).tolist()
            r = rng.random() * math.fsum(scores)
            acc = 0.0
            z = k - 1
            for t, s in enumerate(scores):
                acc += s
                if r < acc:
                    z = t
                    break
            assignment[idx] = z
            n_z[z] += 1
            n_wz[z, b.wi] += 1
            n_wz[z, b.wj] += 1

    total = float(len(biterms))
    theta = [(float(n_z[z]) + alpha) / (total + k * alpha) for z in range(k)]
    phi = [
        [
            (float(n_wz[z, w]) + beta) / (2.0 * float(n_z[z]) + vbeta)
            for w in range(v)
        ]
        for z in range(k)
    ]
    return BtmModel(
        k=k, alpha=alpha, beta=beta, seed=seed,
        vocab=list(vocab), theta=theta, phi=phi,
    )


def train_on_docs(
    token_docs: Sequence[Sequence[str]],
    k: int,
    alpha: Optional[float] = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
) -> BtmModel:
    vocab = build_vocab(token_docs)
    index = {w: i for i, w in enumerate(vocab)}
    biterms: list[Biterm] = []
    for doc in token_docs:
        biterms.extend(extract_biterms([index[t] for t in doc]))
    return train(biterms, vocab, k=k, alpha=alpha, beta=beta, iterations=iterations, seed=seed)


def _check_word(model: BtmModel, w: int) -> None:
    if not (0 <= w < model.vocab_size):
        raise ValueError(f"word index {w} outside vocabulary of size {model.vocab_size}")


def topic_given_biterm(model: BtmModel, b: Biterm) -> list[float]:
    _check_word(model, b.wi)
    _check_word(model, b.wj)
    scores = [model.theta[z] * model.phi[z][b.wi] * model.phi[z][b.wj] for z in range(model.k)]
    total = math.fsum(scores)
    return [s / total for s in scores]


def biterm_given_doc(doc_indices: Sequence[int], b: Biterm) -> float:
    bits = extract_biterms(doc_indices)
    if not bits:
        raise ValueError("document has no biterms")
    return bits.count(b) / len(bits)


def topic_given_doc(model: BtmModel, tokens: Sequence[str]) -> Optional[list[float]]:
    """P(z|d); None when the doc is undecidable (<2 in-vocab tokens)."""
    indices = model.doc_indices(tokens)
    if len(indices) < 2:
        return None
    bits = extract_biterms(indices)
    counts: dict[Biterm, int] = {}
    for b in bits:
        counts[b] = counts.get(b, 0) + 1
    total = len(bits)
    result = [0.0] * model.k
    for b, cnt in counts.items():
        scores = [model.theta[z] * model.phi[z][b.wi] * model.phi[z][b.wj] for z in range(model.k)]
        norm = math.fsum(scores)
        weight = cnt / total
        for z in range(model.k):
            result[z] += weight * (scores[z] / norm)
    return result


def log_likelihood(model: BtmModel, biterms: Sequence[Biterm]) -> float:
    """log P(B) = Σ_b log Σ_z θ_z φ_wi|z φ_wj|z."""
    ll = 0.0
    for b in biterms:
        _check_word(model, b.wi)
        _check_word(model, b.wj)
        ll += math.log(
            math.fsum(model.theta[z] * model.phi[z][b.wi] * model.phi[z][b.wj] for z in range(model.k))
        )
    return ll


def uniform_model(vocab: Sequence[str], k: int) -> BtmModel:
    v = len(vocab)
    return BtmModel(
        k=k, alpha=1.0, beta=1.0, seed=0, vocab=list(vocab),
        theta=[1.0 / k] * k, phi=[[1.0 / v] * v for _ in range(k)],
    )


def save_model(model: BtmModel, path: str) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "k": model.k,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
        "vocab": model.vocab,
        "theta": model.theta,
        "phi": model.phi,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
        fh.write("\n")


def load_model(path: str) -> BtmModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != MODEL_FORMAT or payload.get("version") != MODEL_VERSION:
        raise ValueError(f"not a {MODEL_FORMAT} v{MODEL_VERSION} file: {path}")
    return BtmModel(
        k=payload["k"], alpha=payload["alpha"], beta=payload["beta"], seed=payload["seed"],
        vocab=payload["vocab"], theta=payload["theta"], phi=payload["phi"],
    )
