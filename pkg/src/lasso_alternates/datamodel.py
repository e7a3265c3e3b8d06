"""Sparse column-major design matrices, responses and dataset loaders.

Everything downstream walks the design matrix one column at a time, so the
matrix is stored in compressed sparse column form (``indptr``/``indices``/
``data``).  Loaders exist for libsvm text, CSV and a tab-separated labelled
text corpus that is turned into tf-idf features.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

REGRESSION = "regression"
CLASSIFICATION = "classification"
TASKS = (REGRESSION, CLASSIFICATION)


class DataError(ValueError):
    """Raised for malformed or inconsistent input data."""


class ParseError(DataError):
    """A line of an input file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Immutable ``n x p`` design matrix in compressed sparse column form.

    Column ``j`` occupies ``indices[indptr[j]:indptr[j+1]]`` (strictly
    increasing row indices) and the matching slice of ``data`` (finite,
    nonzero values).
    """

    n: int
    p: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        indptr = np.asarray(self.indptr, dtype=np.int64)
        indices = np.asarray(self.indices, dtype=np.int64)
        data = np.asarray(self.data, dtype=np.float64)
        if self.n < 0 or self.p < 0:
            raise DataError("matrix dimensions must be nonnegative")
        if indptr.shape != (self.p + 1,) or indptr[0] != 0 or np.any(np.diff(indptr) < 0):
            raise DataError("indptr must be a nondecreasing array of length p + 1 starting at 0")
        if indices.shape != data.shape or indices.shape[0] != indptr[-1]:
            raise DataError("indices/data length disagrees with indptr")
        if data.size:
            if not np.all(np.isfinite(data)):
                raise DataError("matrix values must be finite")
            if np.any(data == 0.0):
                raise DataError("explicit zeros must not be stored")
            if indices.min() < 0 or indices.max() >= self.n:
                raise DataError("row index out of range")
            # strictly increasing within each column: a decrease may only occur at a column start
            steps = np.diff(indices)
            starts = np.zeros(indices.size - 1, dtype=bool)
            col_starts = indptr[1:-1]
            col_starts = col_starts[(col_starts > 0) & (col_starts < indices.size)]
            starts[col_starts - 1] = True
            if np.any((steps <= 0) & ~starts):
                raise DataError("row indices within a column must be strictly increasing")
        if self.feature_names is not None:
            names = tuple(str(s) for s in self.feature_names)
            if len(names) != self.p:
                raise DataError(f"expected {self.p} feature names, got {len(names)}")
            object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "indptr", _frozen(indptr))
        object.__setattr__(self, "indices", _frozen(indices))
        object.__setattr__(self, "data", _frozen(data))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_scipy(cls, matrix, feature_names: Sequence[str] | None = None) -> "FeatureMatrix":
        csc = sp.csc_matrix(matrix, dtype=np.float64, copy=True)
        csc.sum_duplicates()
        csc.eliminate_zeros()
        csc.sort_indices()
        n, p = csc.shape
        return cls(n, p, csc.indptr, csc.indices, csc.data,
                   tuple(feature_names) if feature_names is not None else None)

    @classmethod
    def from_dense(cls, array, feature_names: Sequence[str] | None = None) -> "FeatureMatrix":
        array = np.asarray(array, dtype=np.float64)
        if array.ndim != 2:
            raise DataError("dense matrix must be two-dimensional")
        return cls.from_scipy(sp.csc_matrix(array), feature_names)

    @classmethod
    def from_columns(cls, n: int, columns: Sequence[Sequence[tuple[int, float]]],
                     feature_names: Sequence[str] | None = None) -> "FeatureMatrix":
        """Build from ``p`` lists of ``(row, value)`` pairs."""
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for col in columns:
            for r, v in col:
                indices.append(int(r))
                data.append(float(v))
            indptr.append(len(indices))
        return cls(n, len(columns), np.array(indptr), np.array(indices, dtype=np.int64),
                   np.array(data, dtype=np.float64),
                   tuple(feature_names) if feature_names is not None else None)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.p)

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    def column(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(rows, values)`` of column ``j`` as read-only views."""
        if not 0 <= j < self.p:
            raise IndexError(f"column {j} out of range for p={self.p}")
        lo, hi = self.indptr[j], self.indptr[j + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def name(self, j: int) -> str | int:
        return self.feature_names[j] if self.feature_names is not None else j

    @cached_property
    def csc(self) -> sp.csc_matrix:
        return sp.csc_matrix((self.data, self.indices, self.indptr), shape=self.shape)

    @cached_property
    def column_sq_norms(self) -> np.ndarray:
        owners = np.repeat(np.arange(self.p), np.diff(self.indptr))
        sq = np.bincount(owners, weights=self.data ** 2, minlength=self.p)
        return _frozen(np.asarray(sq, dtype=np.float64))

    def column_dot(self, j: int, v: np.ndarray) -> float:
        rows, vals = self.column(j)
        return float(vals @ v[rows])

    def matvec(self, beta: np.ndarray) -> np.ndarray:
        """``X @ beta`` as a dense n-vector."""
        return np.asarray(self.csc @ np.asarray(beta, dtype=np.float64)).ravel()

    def rmatvec(self, g: np.ndarray) -> np.ndarray:
        """``X.T @ g``; one sparse column traversal per feature."""
        return np.asarray(self.csc.T @ np.asarray(g, dtype=np.float64)).ravel()

    def toarray(self) -> np.ndarray:
        return self.csc.toarray()


def check_response(values, task: str) -> np.ndarray:
    """Validate a response vector for ``task`` and return it as a float array."""
    if task not in TASKS:
        raise DataError(f"unknown task kind {task!r}")
    y = np.asarray(values, dtype=np.float64)
    if y.ndim != 1:
        raise DataError("response must be one-dimensional")
    if not np.all(np.isfinite(y)):
        raise DataError("response values must be finite")
    if task == CLASSIFICATION and not np.all(np.abs(y) == 1.0):
        raise DataError("classification responses must be exactly +1 or -1")
    return y


@dataclass(frozen=True, eq=False)
class Dataset:
    matrix: FeatureMatrix
    y: np.ndarray
    task: str = REGRESSION

    def __post_init__(self):
        y = check_response(self.y, self.task)
        if y.shape[0] != self.matrix.n:
            raise DataError(f"response has {y.shape[0]} entries but matrix has {self.matrix.n} rows")
        object.__setattr__(self, "y", _frozen(y.copy()))

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def p(self) -> int:
        return self.matrix.p


# -- label handling ---------------------------------------------------------


def _as_number(s: str) -> float | None:
    try:
        v = float(s)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def labels_to_response(labels: Sequence[str], task: str | None = None) -> tuple[np.ndarray, str]:
    """Map raw label strings to a response vector.

    With ``task=None`` exactly two distinct labels give a classification
    problem; labels already equal to -1/+1 keep their sign, otherwise the
    smaller label (numerically if all labels are numbers) becomes -1.
    Anything else must be numeric and is kept as a regression target.
    """
    numbers = [_as_number(s) for s in labels]
    all_numeric = all(v is not None for v in numbers)
    distinct = sorted(set(numbers)) if all_numeric else sorted(set(labels))
    if task is None:
        task = CLASSIFICATION if len(distinct) == 2 else REGRESSION
    if task == CLASSIFICATION:
        if len(distinct) > 2:
            raise DataError(f"classification needs at most two distinct labels, found {len(distinct)}")
        if all_numeric and set(distinct) <= {-1.0, 1.0}:
            return np.array(numbers, dtype=np.float64), task
        if len(distinct) < 2:
            raise DataError("cannot infer +1/-1 labels from a single class")
        keys = numbers if all_numeric else list(labels)
        return np.array([1.0 if k == distinct[1] else -1.0 for k in keys]), task
    if not all_numeric:
        bad = next(s for s, v in zip(labels, numbers) if v is None)
        raise DataError(f"non-numeric regression target {bad!r}")
    return np.array(numbers, dtype=np.float64), task


# -- libsvm -------------------------------------------------------------------


def parse_libsvm(lines: Iterable[str], task: str | None = None) -> Dataset:
    labels: list[str] = []
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    p = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        row = len(labels)
        labels.append(tokens[0])
        last = 0
        for tok in tokens[1:]:
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise ParseError(f"expected index:value, got {tok!r}", lineno)
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise ParseError(f"bad index:value pair {tok!r}", lineno) from None
            if idx < 1:
                raise ParseError(f"feature indices are 1-based, got {idx}", lineno)
            if idx <= last:
                raise ParseError(f"feature indices must be strictly increasing ({idx} after {last})", lineno)
            if not math.isfinite(val):
                raise ParseError(f"non-finite value {val_s!r}", lineno)
            last = idx
            p = max(p, idx)
            if val != 0.0:
                rows.append(row)
                cols.append(idx - 1)
                vals.append(val)
    if not labels:
        raise DataError("no observations in libsvm input")
    y, task = labels_to_response(labels, task)
    X = sp.csc_matrix((vals, (rows, cols)), shape=(len(labels), p))
    return Dataset(FeatureMatrix.from_scipy(X), y, task)


def load_libsvm(path, task: str | None = None) -> Dataset:
    """Read a libsvm-format file (``label idx:val ...`` with 1-based indices)."""
    with open(path, encoding="utf-8") as fh:
        return parse_libsvm(fh, task)


def _format_label(v: float, task: str) -> str:
    if task == CLASSIFICATION:
        return "+1" if v > 0 else "-1"
    return repr(float(v))


def write_libsvm(dataset: Dataset, path) -> None:
    X = dataset.matrix.csc.tocsr()
    X.sort_indices()
    with open(path, "w", encoding="utf-8") as fh:
        for r in range(dataset.n):
            lo, hi = X.indptr[r], X.indptr[r + 1]
            cells = " ".join(f"{c + 1}:{float(v)!r}" for c, v in zip(X.indices[lo:hi], X.data[lo:hi]))
            label = _format_label(dataset.y[r], dataset.task)
            fh.write(f"{label} {cells}\n" if cells else f"{label}\n")


# -- CSV ----------------------------------------------------------------------


def load_csv(path, target_column: str | int, has_header: bool = True,
             task: str | None = None) -> Dataset:
    """Read a rectangular CSV file; every non-target column is a feature."""
    with open(path, newline="", encoding="utf-8") as fh:
        records = [r for r in csv.reader(fh) if r]
    if has_header:
        if not records:
            raise DataError("CSV file is empty")
        header, records = [h.strip() for h in records[0]], records[1:]
    else:
        header = None
    if not records:
        raise DataError("CSV file has no data rows")
    width = len(header) if header is not None else len(records[0])
    for k, rec in enumerate(records):
        if len(rec) != width:
            row_no = k + (2 if has_header else 1)
            raise DataError(f"row {row_no}: expected {width} cells, found {len(rec)}")

    if isinstance(target_column, str) and header is not None and target_column in header:
        target = header.index(target_column)
    elif isinstance(target_column, int) or (isinstance(target_column, str) and target_column.lstrip("-").isdigit()):
        target = int(target_column)
        if target < 0:
            target += width
        if not 0 <= target < width:
            raise DataError(f"target column index {target_column} out of range for {width} columns")
    else:
        available = ", ".join(header) if header is not None else f"indices 0..{width - 1}"
        raise DataError(f"target column {target_column!r} not found; available columns: {available}")

    feature_cols = [c for c in range(width) if c != target]
    dense = np.empty((len(records), len(feature_cols)))
    for k, rec in enumerate(records):
        row_no = k + (2 if has_header else 1)
        for out, c in enumerate(feature_cols):
            v = _as_number(rec[c].strip())
            if v is None:
                col_name = header[c] if header is not None else str(c)
                raise DataError(f"row {row_no}, column {col_name!r}: non-numeric cell {rec[c]!r}")
            dense[k, out] = v
    labels = [rec[target].strip() for rec in records]
    y, task = labels_to_response(labels, task)
    names = [header[c] for c in feature_cols] if header is not None else None
    return Dataset(FeatureMatrix.from_dense(dense, names), y, task)


# -- text -----------------------------------------------------------------------

_TOKEN = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop tokens shorter than 2."""
    return [t for t in _TOKEN.findall(text.lower()) if len(t) >= 2]


def vectorize_text(documents: Sequence[tuple[str, str]], stop_words: Iterable[str] | None = None,
                   min_df: int = 1) -> Dataset:
    """tf-idf bag of words over ``(label, text)`` documents.

    Cell value is ``tf(t, d) * ln(n / df(t))`` with raw counts and no
    smoothing, so a token present in every document yields an all-zero
    column.  Columns follow first appearance in the corpus.
    """
    if len(documents) < 2:
        raise DataError("need at least two documents")
    labels = [str(lab) for lab, _ in documents]
    if len(set(labels)) != 2:
        raise DataError(f"need exactly two distinct labels, found {len(set(labels))}")
    stop = {w.lower() for w in stop_words} if stop_words is not None else set()

    counts: list[dict[str, int]] = []
    df: dict[str, int] = {}  # insertion order = first appearance
    for _, text in documents:
        tf: dict[str, int] = {}
        for tok in tokenize(text):
            tf[tok] = tf.get(tok, 0) + 1
        for tok in tf:
            df[tok] = df.get(tok, 0) + 1
        counts.append(tf)

    vocab = [t for t, d in df.items() if d >= min_df and t not in stop]
    if not vocab:
        raise DataError("vocabulary is empty after min_df/stop-word filtering")
    n = len(documents)
    col_of = {t: k for k, t in enumerate(vocab)}
    columns: list[list[tuple[int, float]]] = [[] for _ in vocab]
    for d, tf in enumerate(counts):
        for tok, c in tf.items():
            k = col_of.get(tok)
            if k is None:
                continue
            w = c * math.log(n / df[tok])
            if w != 0.0:
                columns[k].append((d, w))
    y, task = labels_to_response(labels, CLASSIFICATION)
    return Dataset(FeatureMatrix.from_columns(n, columns, vocab), y, task)


def parse_corpus(lines: Iterable[str]) -> list[tuple[str, str]]:
    docs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        label, sep, text = line.partition("\t")
        if not sep:
            raise ParseError("expected label<TAB>text", lineno)
        docs.append((label.strip(), text))
    return docs


def read_word_list(path) -> list[str]:
    return [w.strip() for w in Path(path).read_text(encoding="utf-8").split() if w.strip()]


def load_text(path, stop_words: Iterable[str] | None = None, min_df: int = 1) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        docs = parse_corpus(fh)
    return vectorize_text(docs, stop_words=stop_words, min_df=min_df)
