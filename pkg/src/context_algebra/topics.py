"""Desk-scale topic models: truncated SVD, pLSA by EM, LDA marginals.

Inputs here are small term-document tables, so everything is dense.
pLSA runs the textbook EM updates; initialization draws responsibilities
from a seeded uniform and takes one M step, which keeps runs bit-identical
for a fixed seed.
"""

from __future__ import annotations

import numpy as np

from .errors import AlphaError, DegenerateInput, FormatError, RankError


class CountMatrix:
    """Terms x documents table of non-negative counts."""

    def __init__(self, values, row_labels=None, col_labels=None):
        array = np.asarray(values, dtype=float)
        if array.ndim != 2 or array.size == 0:
            raise FormatError("count matrix must be 2-D and non-empty")
        if not np.all(np.isfinite(array)) or np.any(array < 0):
            raise FormatError("counts must be finite and non-negative")
        self.values = array
        rows, cols = array.shape
        self.row_labels = list(row_labels) if row_labels else ["t%d" % i for i in range(rows)]
        self.col_labels = list(col_labels) if col_labels else ["d%d" % j for j in range(cols)]
        if len(self.row_labels) != rows or len(self.col_labels) != cols:
            raise FormatError("label counts do not match matrix shape")

    @property
    def shape(self):
        return self.values.shape

    def __getitem__(self, key):
        row, col = key
        i = self.row_labels.index(row) if isinstance(row, str) else row
        j = self.col_labels.index(col) if isinstance(col, str) else col
        return self.values[i, j]


def load_count_matrix(path):
    """TSV: header row of document labels, then `term<TAB>counts...` rows."""
    with open(path, encoding="utf-8") as handle:
        lines = [l.rstrip("\n") for l in handle if l.strip() and not l.startswith("#")]
    if len(lines) < 2:
        raise FormatError("%s: need a header and at least one term row" % path)
    header = lines[0].split("\t")
    col_labels = header[1:] if header[0] in ("", "term") else header
    rows, row_labels = [], []
    for line in lines[1:]:
        parts = line.split("\t")
        if len(parts) != len(col_labels) + 1:
            raise FormatError("%s: row %r has wrong arity" % (path, parts[0]))
        row_labels.append(parts[0])
        try:
            rows.append([float(x) for x in parts[1:]])
        except ValueError as exc:
            raise FormatError("%s: bad count in row %r" % (path, parts[0])) from exc
    return CountMatrix(rows, row_labels, col_labels)


def lsa_truncate(matrix, k):
    """Top-k singular triplets and the rank-k reconstruction."""
    values = matrix.values if isinstance(matrix, CountMatrix) else np.asarray(matrix, float)
    max_rank = min(values.shape)
    if not 1 <= k <= max_rank:
        raise RankError("rank %d outside 1..%d" % (k, max_rank))
    u, s, vt = np.linalg.svd(values, full_matrices=False)
    approx = (u[:, :k] * s[:k]) @ vt[:k, :]
    return {"singular_values": [float(x) for x in s[:k]], "approx": approx}


class PlsaModel:
    """Fitted pLSA parameters plus the log-likelihood trace."""

    def __init__(self, pz, pw_z, pd_z, loglik):
        self.pz = pz          # (K,)
        self.pw_z = pw_z      # (K, W) rows sum to 1
        self.pd_z = pd_z      # (K, D) rows sum to 1
        self.loglik = loglik  # one value per recorded iteration


def _log_likelihood(counts, pz, pw_z, pd_z):
    # joint P(d, w) = sum_z P(z) P(d|z) P(w|z); counts is (W, D)
    joint = np.einsum("z,zw,zd->wd", pz, pw_z, pd_z)
    mask = counts > 0
    return float(np.sum(counts[mask] * np.log(joint[mask])))


def plsa_em(matrix, topics, iters, seed):
    """EM for pLSA on a term-document count matrix.

    The responsibilities P(z|d,w) start from seeded uniform noise; one M
    step turns them into a model, then `iters` proper E+M rounds follow,
    recording the log-likelihood after each.
    """
    counts = matrix.values if isinstance(matrix, CountMatrix) else np.asarray(matrix, float)
    if topics < 1:
        raise RankError("need at least one topic")
    if not np.any(counts > 0):
        raise DegenerateInput("all-zero count matrix")
    n_words, n_docs = counts.shape
    rng = np.random.default_rng(seed)

    resp = rng.uniform(0.1, 1.0, size=(topics, n_words, n_docs))
    resp /= resp.sum(axis=0, keepdims=True)

    def m_step(resp):
        weighted = resp * counts[None, :, :]          # (K, W, D)
        totals = weighted.sum(axis=(1, 2))            # (K,)
        pz = totals / totals.sum()
        pw_z = weighted.sum(axis=2)                   # (K, W)
        pd_z = weighted.sum(axis=1)                   # (K, D)
        pw_z = np.where(totals[:, None] > 0, pw_z / np.maximum(totals[:, None], 1e-300), 1.0 / n_words)
        pd_z = np.where(totals[:, None] > 0, pd_z / np.maximum(totals[:, None], 1e-300), 1.0 / n_docs)
        return pz, pw_z, pd_z

    pz, pw_z, pd_z = m_step(resp)
    trace = []
    for _ in range(iters):
        # E step: P(z|d,w) proportional to P(z)P(d|z)P(w|z)
        joint = np.einsum("z,zw,zd->zwd", pz, pw_z, pd_z)
        denom = joint.sum(axis=0, keepdims=True)
        resp = np.where(denom > 0, joint / np.maximum(denom, 1e-300), 1.0 / topics)
        pz, pw_z, pd_z = m_step(resp)
        trace.append(_log_likelihood(counts, pz, pw_z, pd_z))
    return PlsaModel(pz, pw_z, pd_z, trace)


def lda_marginal_topic(alpha):
    """Marginal topic distribution alpha_i / sum(alpha)."""
    alpha = list(alpha)
    if not alpha or any(a <= 0 for a in alpha):
        raise AlphaError("alpha components must be strictly positive")
    total = sum(alpha)
    return [a / total for a in alpha]
