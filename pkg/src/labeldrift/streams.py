"""Multi-label stream datasets: file format, metadata, and synthetic drift streams.

File format. Line 1 is a header of three space-separated integers
``N D n`` (instances, numeric features, binary labels). Each following
line is one instance as D + n comma-separated values, label block first by
default. Labels must be literal 0/1; features are floats.

Synthetic streams. Each concept is a set of labelsets, one isotropic
Gaussian feature cluster per labelset. Drift between consecutive concepts
is smoothed with a sigmoid over a transition width; width 1 is an exact
step. The generator is fully reproducible from its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._validation import check_label_vector

__all__ = [
    "Instance",
    "DatasetMeta",
    "StreamFormatError",
    "read_dataset",
    "write_dataset",
    "DriftStreamSpec",
    "sigmoid_mix_probability",
    "generate_synthetic",
]

KINDS = ("sudden", "incremental", "reoccurring")


@dataclass
class Instance:
    """One stream element: numeric features plus a binary label vector."""

    features: np.ndarray
    labels: np.ndarray


@dataclass(frozen=True)
class DatasetMeta:
    """Dataset shape plus label statistics.

    label_cardinality is the mean number of set labels per instance and
    label_density is that mean divided by n_labels.
    """

    n_samples: int
    n_features: int
    n_labels: int
    label_cardinality: float
    label_density: float


class StreamFormatError(ValueError):
    """A dataset file violates the format; carries the offending line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _meta_from(instances, n_features, n_labels):
    total = sum(int(inst.labels.sum()) for inst in instances)
    n = len(instances)
    cardinality = total / n if n else 0.0
    density = cardinality / n_labels if n_labels else 0.0
    return DatasetMeta(n, n_features, n_labels, cardinality, density)


def read_dataset(path, n_labels=None, labels_first=True):
    """Read a dataset file, returning (DatasetMeta, list of Instance).

    Instances come back in file order. A zero-byte file is an empty dataset.
    Structural problems raise StreamFormatError with the line number; a
    missing file raises the usual OSError.
    """
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines or not lines[0].strip():
        if any(line.strip() for line in lines):
            raise StreamFormatError(1, "missing header")
        return DatasetMeta(0, 0, n_labels or 0, 0.0, 0.0), []

    header = lines[0].split()
    if len(header) != 3:
        raise StreamFormatError(1, f"header must be 'N D n', got {lines[0]!r}")
    try:
        declared, n_features, file_labels = (int(part) for part in header)
    except ValueError as err:
        raise StreamFormatError(1, f"header must hold three integers, got {lines[0]!r}") from err
    if declared < 0 or n_features < 1 or file_labels < 1:
        raise StreamFormatError(1, f"header values out of range: {lines[0]!r}")
    if n_labels is not None and n_labels != file_labels:
        raise StreamFormatError(1, f"expected {n_labels} labels, file declares {file_labels}")

    instances = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue  # tolerate blank lines (trailing newlines in practice)
        parts = line.split(",")
        expected = n_features + file_labels
        if len(parts) != expected:
            raise StreamFormatError(line_no, f"expected {expected} values, got {len(parts)}")
        if labels_first:
            label_parts, feature_parts = parts[:file_labels], parts[file_labels:]
        else:
            feature_parts, label_parts = parts[:n_features], parts[n_features:]
        labels = np.empty(file_labels, dtype=np.uint8)
        for k, text in enumerate(label_parts):
            text = text.strip()
            if text not in ("0", "1"):
                raise StreamFormatError(line_no, f"label value must be 0 or 1, got {text!r}")
            labels[k] = int(text)
        try:
            features = np.array([float(text) for text in feature_parts], dtype=np.float64)
        except ValueError as err:
            raise StreamFormatError(line_no, f"bad feature value ({err})") from err
        instances.append(Instance(features=features, labels=labels))

    if len(instances) != declared:
        raise StreamFormatError(
            len(lines), f"header declares {declared} instances, file holds {len(instances)}")
    return _meta_from(instances, n_features, file_labels), instances


def write_dataset(path, instances, labels_first=True):
    """Write instances to a dataset file and return its DatasetMeta.

    Features are written with repr so a round-trip reproduces them exactly.
    """
    instances = list(instances)
    if not instances:
        raise ValueError("cannot write an empty dataset (no shape information)")
    n_features = instances[0].features.shape[0]
    n_labels = instances[0].labels.shape[0]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(instances)} {n_features} {n_labels}\n")
        for k, inst in enumerate(instances):
            labels = check_label_vector(inst.labels, n_labels, name=f"instance {k} labels")
            if inst.features.shape[0] != n_features:
                raise ValueError(f"instance {k} has {inst.features.shape[0]} features, "
                                 f"expected {n_features}")
            label_text = [str(int(bit)) for bit in labels]
            feature_text = [repr(float(value)) for value in inst.features]
            blocks = label_text + feature_text if labels_first else feature_text + label_text
            handle.write(",".join(blocks) + "\n")
    return _meta_from(instances, n_features, n_labels)


@dataclass(frozen=True)
class DriftStreamSpec:
    """Configuration of a synthetic multi-label drift stream.

    drift_positions are 0-based sample indices where the next concept takes
    over (the centers of the sigmoid transitions); drift_widths are the
    matching transition widths in samples, width 1 meaning an exact step.
    kind "reoccurring" makes the final concept the first one again.
    """

    n_samples: int = 20000
    n_features: int = 200
    n_labels: int = 50
    drift_positions: tuple = (4000, 10000)
    drift_widths: tuple = (500, 500)
    kind: str = "incremental"
    seed: int = 1
    labelsets_per_concept: int = 30
    cardinality_rate: float = 0.6
    max_cardinality: int = 5
    cluster_spread: float = 0.1

    def validate(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be positive, got {self.n_samples}")
        if self.n_features < 1:
            raise ValueError(f"n_features must be positive, got {self.n_features}")
        if self.n_labels < 2:
            raise ValueError(f"n_labels must be at least 2, got {self.n_labels}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        positions = tuple(self.drift_positions)
        widths = tuple(self.drift_widths)
        if len(positions) != len(widths):
            raise ValueError("drift_positions and drift_widths must have equal length")
        if any(not 0 < p < self.n_samples for p in positions):
            raise ValueError(f"drift positions must lie inside (0, {self.n_samples})")
        if any(p2 <= p1 for p1, p2 in zip(positions, positions[1:])):
            raise ValueError("drift positions must be strictly increasing")
        if any(w < 1 for w in widths):
            raise ValueError("drift widths must be at least 1")
        if self.labelsets_per_concept < 1:
            raise ValueError("labelsets_per_concept must be positive")
        if not 0 < self.max_cardinality <= self.n_labels:
            raise ValueError("max_cardinality must lie in [1, n_labels]")
        if self.cardinality_rate < 0:
            raise ValueError("cardinality_rate must be non-negative")
        if not self.cluster_spread > 0:
            raise ValueError("cluster_spread must be positive")


def sigmoid_mix_probability(index, position, width):
    """Probability that sample `index` is drawn from the post-drift concept."""
    if width == 1:
        return 1.0 if index >= position else 0.0
    a = 4.0 * (index - position) / width
    if a >= 0.0:
        return 1.0 / (1.0 + math.exp(-a))
    e = math.exp(a)
    return e / (1.0 + e)


@dataclass
class _Concept:
    labelsets: np.ndarray  # (k, n_labels) uint8
    centers: np.ndarray    # (k, n_features) in the unit cube

    @classmethod
    def draw(cls, rng, spec):
        k = spec.labelsets_per_concept
        labelsets = np.zeros((k, spec.n_labels), dtype=np.uint8)
        for row in range(k):
            cardinality = min(1 + rng.poisson(spec.cardinality_rate), spec.max_cardinality)
            chosen = rng.choice(spec.n_labels, size=cardinality, replace=False)
            labelsets[row, chosen] = 1
        centers = rng.random((k, spec.n_features))
        return cls(labelsets=labelsets, centers=centers)


def generate_synthetic(spec) -> Iterator[Instance]:
    """Yield the instances of a synthetic drift stream, in order.

    One concept per drift boundary plus one; when several transitions
    overlap, the newest concept whose transition admits the sample wins.
    Identical specs yield identical streams.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    positions = tuple(spec.drift_positions)
    widths = tuple(spec.drift_widths)
    concepts = []
    for k in range(len(positions) + 1):
        if spec.kind == "reoccurring" and k == len(positions) and k > 0:
            concepts.append(concepts[0])
        else:
            concepts.append(_Concept.draw(rng, spec))

    for index in range(spec.n_samples):
        active = 0
        for boundary, (position, width) in enumerate(zip(positions, widths)):
            if width == 1:
                takes_new = index >= position
            else:
                takes_new = rng.random() < sigmoid_mix_probability(index, position, width)
            if takes_new:
                active = boundary + 1
        concept = concepts[active]
        row = int(rng.integers(len(concept.labelsets)))
        features = concept.centers[row] + spec.cluster_spread * rng.standard_normal(
            spec.n_features)
        yield Instance(features=features, labels=concept.labelsets[row].copy())
