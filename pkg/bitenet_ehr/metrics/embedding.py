# import libs
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Sequence, Set, Tuple, Union
import numpy as np
from pydantic import BaseModel, ConfigDict
# local
from ..ehr import Vocabulary
from ..errors import IngestionError, ShapeError
from ..network import BiteNetParams

# NOTE: logger
logger = logging.getLogger(__name__)

DistanceMetric = Literal["euclidean", "cosine"]


class CodeEmbeddings(BaseModel):
    """Code strings and their embedding rows, in the same order."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    codes: Tuple[str, ...]
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def subset(self, codes: Sequence[str]) -> "CodeEmbeddings":
        index = {c: i for i, c in enumerate(self.codes)}
        rows = [index[c] for c in codes]
        return CodeEmbeddings(codes=tuple(codes), matrix=self.matrix[rows])


def extract_code_embeddings(params: BiteNetParams, vocab: Vocabulary) -> CodeEmbeddings:
    """Rows ``1..|X|`` of the code embedding, keyed by code string."""
    matrix = params.code_embedding.data[1:]
    if matrix.shape[0] != vocab.num_codes:
        raise ShapeError(
            f"embedding has {matrix.shape[0]} code rows, vocabulary has {vocab.num_codes} codes")
    return CodeEmbeddings(codes=tuple(vocab.codes), matrix=matrix.copy())


# SECTION: export file
def write_embeddings(path: Union[str, Path], embeddings: CodeEmbeddings) -> Path:
    """
    Write ``code<TAB>d`` followed by one ``code<TAB>v1,...,vd`` line per code,
    codes sorted lexicographically. Values use the shortest repr that parses
    back to the same float.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    order = sorted(range(len(embeddings.codes)), key=lambda i: embeddings.codes[i])
    lines = [f"code\t{embeddings.dim}"]
    for i in order:
        values = ",".join(repr(float(v)) for v in embeddings.matrix[i])
        lines.append(f"{embeddings.codes[i]}\t{values}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info(f"embeddings written: {path} ({len(order)} codes, d={embeddings.dim})")
    return path


def read_embeddings(path: Union[str, Path]) -> CodeEmbeddings:
    """Parse a file written by ``write_embeddings``; values come back as float64."""
    path = Path(path)
    if not path.is_file():
        raise IngestionError("embedding file not found", path=path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("code\t"):
        raise IngestionError("missing 'code<TAB>d' header", path=path, line=1)
    try:
        dim = int(lines[0].split("\t")[1])
    except ValueError as e:
        raise IngestionError("header dimension is not an integer", path=path, line=1) from e

    codes: List[str] = []
    rows: List[List[float]] = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            code, values = line.split("\t")
            row = [float(v) for v in values.split(",")]
        except ValueError as e:
            raise IngestionError("expected 'code<TAB>v1,...,vd'", path=path, line=number) from e
        if len(row) != dim:
            raise IngestionError(f"expected {dim} values, got {len(row)}", path=path, line=number)
        codes.append(code)
        rows.append(row)
    matrix = np.array(rows, dtype=np.float64).reshape(len(rows), dim)
    return CodeEmbeddings(codes=tuple(codes), matrix=matrix)


# SECTION: nearest-neighbour search
def _distances(matrix: np.ndarray, metric: DistanceMetric) -> np.ndarray:
    x = np.asarray(matrix, dtype=np.float64)
    if metric == "cosine":
        norms = np.linalg.norm(x, axis=1, keepdims=True)
        unit = x / np.where(norms > 0, norms, 1.0)
        return 1.0 - unit @ unit.T
    if metric != "euclidean":
        raise ValueError(f"unknown distance metric: {metric!r}")
    squared = (x * x).sum(axis=1)
    d2 = squared[:, None] + squared[None, :] - 2.0 * (x @ x.T)
    return np.sqrt(np.maximum(d2, 0.0))


def neighbour_sets(codes: Sequence[str], pairs: Iterable[Tuple[str, str]]) -> Dict[int, Set[int]]:
    """True neighbours per code index; pairs naming unknown codes are ignored."""
    index = {c: i for i, c in enumerate(codes)}
    neighbours: Dict[int, Set[int]] = {}
    skipped = 0
    for a, b in pairs:
        if a not in index or b not in index or a == b:
            skipped += 1
            continue
        neighbours.setdefault(index[a], set()).add(index[b])
        neighbours.setdefault(index[b], set()).add(index[a])
    if skipped:
        logger.debug(f"{skipped} pairs reference codes outside the embedding")
    return neighbours


def nns_accuracy_at_k(
    embeddings: CodeEmbeddings,
    pairs: Iterable[Tuple[str, str]],
    k: int,
    metric: DistanceMetric = "euclidean"
) -> float:
    """
    Nearest-neighbour search accuracy.

    For every code with at least one true neighbour, retrieve its ``k`` nearest
    codes (itself excluded, equal distances broken by index) and score
    ``|retrieved ∩ neighbours| / k``; return the mean over those codes.

    Raises
    ------
    ValueError
        ``k`` is not smaller than the number of codes, or no code has a neighbour.
    """
    n = len(embeddings.codes)
    if k < 1 or k >= n:
        raise ValueError(f"k must be in [1, {n - 1}] for {n} codes, got {k}")
    neighbours = neighbour_sets(embeddings.codes, pairs)
    if not neighbours:
        raise ValueError("no pair references two embedded codes")

    distances = _distances(embeddings.matrix, metric)
    np.fill_diagonal(distances, np.inf)
    scores = []
    for query in sorted(neighbours):
        retrieved = np.argsort(distances[query], kind="stable")[:k]
        scores.append(len(set(retrieved.tolist()) & neighbours[query]) / k)
    return float(np.mean(scores))


# SECTION: clustering
def kmeans(
    points: np.ndarray,
    k: int,
    seed: int,
    max_iters: int = 100
) -> np.ndarray:
    """
    Lloyd's k-means with k-means++ seeding.

    Iterates until assignments stop changing or ``max_iters`` is reached. A
    cluster that empties takes the point farthest from its current centre.

    Returns
    -------
    np.ndarray
        Cluster id per point.
    """
    x = np.asarray(points, dtype=np.float64)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)

    # k-means++ seeding
    chosen = [int(rng.integers(n))]
    closest = ((x - x[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=closest / total))
        else:
            remaining = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(remaining))
        chosen.append(nxt)
        closest = np.minimum(closest, ((x - x[nxt]) ** 2).sum(axis=1))
    centres = x[chosen].copy()

    assign = np.full(n, -1, dtype=np.int64)
    for _ in range(max_iters):
        d2 = ((x[:, None, :] - centres[None, :, :]) ** 2).sum(axis=2)
        new_assign = np.argmin(d2, axis=1)
        for c in range(k):
            if np.any(new_assign == c):
                continue
            own = d2[np.arange(n), new_assign]
            sizes = np.bincount(new_assign, minlength=k)
            movable = np.where(sizes[new_assign] > 1, own, -np.inf)
            far = int(np.argmax(movable))
            new_assign[far] = c
            centres[c] = x[far]
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k):
            centres[c] = x[assign == c].mean(axis=0)
    return assign


def inertia(points: np.ndarray, assign: np.ndarray) -> float:
    """Sum of squared distances from points to their cluster means."""
    x = np.asarray(points, dtype=np.float64)
    total = 0.0
    for c in np.unique(assign):
        members = x[assign == c]
        total += float(((members - members.mean(axis=0)) ** 2).sum())
    return total


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def nmi(assign_a: Sequence[int], assign_b: Sequence[int]) -> float:
    """
    Normalised mutual information ``I(A;B) / sqrt(H(A) H(B))``.

    When both partitions are a single cluster the result is 1.0; when exactly
    one is, 0.0.

    Raises
    ------
    ValueError
        Empty input or different lengths.
    """
    a = np.asarray(assign_a).reshape(-1)
    b = np.asarray(assign_b).reshape(-1)
    if a.size == 0:
        raise ValueError("nmi of empty assignments")
    if a.shape != b.shape:
        raise ValueError(f"assignments differ in length: {a.size} vs {b.size}")

    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    table = np.zeros((ia.max() + 1, ib.max() + 1), dtype=np.float64)
    np.add.at(table, (ia, ib), 1.0)

    h_a = _entropy(table.sum(axis=1))
    h_b = _entropy(table.sum(axis=0))
    if h_a == 0.0 and h_b == 0.0:
        return 1.0
    if h_a == 0.0 or h_b == 0.0:
        return 0.0

    joint = table / a.size
    outer = np.outer(joint.sum(axis=1), joint.sum(axis=0))
    nz = joint > 0
    mutual = float((joint[nz] * np.log(joint[nz] / outer[nz])).sum())
    return float(min(max(mutual / np.sqrt(h_a * h_b), 0.0), 1.0))
