# import libs
import math
import numpy as np
import pytest
# local
from bitenet_ehr.errors import IngestionError, ShapeError
from bitenet_ehr.metrics import (
    CodeEmbeddings,
    evaluate_embeddings,
    extract_code_embeddings,
    inertia,
    kmeans,
    nmi,
    nns_accuracy_at_k,
    read_embeddings,
    write_embeddings
)
from bitenet_ehr.network import init_params


def cluster_embeddings(rng, clusters: int = 3, size: int = 4, spread: float = 0.01):
    codes, rows, labels = [], [], {}
    for c in range(clusters):
        centre = np.zeros(clusters)
        centre[c] = 10.0
        for j in range(size):
            code = f"dx:c{c}m{j}"
            codes.append(code)
            rows.append(centre + rng.normal(scale=spread, size=clusters))
            labels[code] = c
    pairs = [(a, b) for a in codes for b in codes if a < b and labels[a] == labels[b]]
    return CodeEmbeddings(codes=tuple(codes), matrix=np.array(rows)), pairs, labels


def brute_nns(points, pairs_idx, k):
    n = len(points)
    neighbours = {}
    for a, b in pairs_idx:
        neighbours.setdefault(a, set()).add(b)
        neighbours.setdefault(b, set()).add(a)
    scores = []
    for q in sorted(neighbours):
        d2 = [(sum((points[q][t] - points[j][t]) ** 2 for t in range(len(points[q]))), j)
              for j in range(n) if j != q]
        retrieved = {j for _, j in sorted(d2)[:k]}
        scores.append(len(retrieved & neighbours[q]) / k)
    return sum(scores) / len(scores)


def brute_nmi(a, b):
    n = len(a)
    joint, pa, pb = {}, {}, {}
    for x, y in zip(a, b):
        joint[(x, y)] = joint.get((x, y), 0) + 1
        pa[x] = pa.get(x, 0) + 1
        pb[y] = pb.get(y, 0) + 1
    h_a = -sum(c / n * math.log(c / n) for c in pa.values())
    h_b = -sum(c / n * math.log(c / n) for c in pb.values())
    if h_a == 0 and h_b == 0:
        return 1.0
    if h_a == 0 or h_b == 0:
        return 0.0
    mi = sum(c / n * math.log((c / n) / (pa[x] / n * pb[y] / n)) for (x, y), c in joint.items())
    return mi / math.sqrt(h_a * h_b)


# SECTION: nearest-neighbour search
def test_nns_planted_clusters(rng):
    embeddings, pairs, _ = cluster_embeddings(rng)
    assert nns_accuracy_at_k(embeddings, pairs, 1) == 1.0
    # 3 true neighbours per code bound the score at k=5
    assert nns_accuracy_at_k(embeddings, pairs, 5) == pytest.approx(3 / 5)
    assert nns_accuracy_at_k(embeddings, pairs, 1, metric="cosine") == 1.0


def test_nns_errors(rng):
    embeddings, pairs, _ = cluster_embeddings(rng)
    with pytest.raises(ValueError):
        nns_accuracy_at_k(embeddings, pairs, len(embeddings.codes))
    with pytest.raises(ValueError):
        nns_accuracy_at_k(embeddings, [("dx:x", "dx:y")], 1)


def test_nns_random_embeddings(rng):
    n, size = 200, 5
    codes = [f"dx:{i:03d}" for i in range(n)]
    pairs = [(codes[a], codes[b]) for start in range(0, n, size)
             for a in range(start, start + size) for b in range(a + 1, start + size)]
    embeddings = CodeEmbeddings(codes=tuple(codes), matrix=rng.normal(size=(n, 8)))
    assert nns_accuracy_at_k(embeddings, pairs, 1) == pytest.approx((size - 1) / (n - 1), abs=0.04)


def test_nns_matches_brute_force(rng):
    for _ in range(100):
        n = int(rng.integers(3, 21))
        points = rng.integers(0, 4, size=(n, 2)).astype(float)
        codes = tuple(f"dx:{i:02d}" for i in range(n))
        idx_pairs = {tuple(sorted(rng.choice(n, size=2, replace=False).tolist()))
                     for _ in range(int(rng.integers(1, n + 1)))}
        pairs = [(codes[a], codes[b]) for a, b in idx_pairs]
        k = int(rng.integers(1, n))
        got = nns_accuracy_at_k(CodeEmbeddings(codes=codes, matrix=points), pairs, k)
        assert got == pytest.approx(brute_nns(points.tolist(), idx_pairs, k), abs=1e-12)


# SECTION: clustering
def test_kmeans_separates_blobs(rng):
    points = np.vstack([rng.normal(0.0, 0.1, size=(20, 2)), rng.normal(5.0, 0.1, size=(20, 2))])
    assign = kmeans(points, 2, seed=0)
    assert len(set(assign[:20].tolist())) == 1
    assert len(set(assign[20:].tolist())) == 1
    assert assign[0] != assign[20]


def test_kmeans_one_point_per_cluster(rng):
    points = rng.normal(size=(6, 3))
    assign = kmeans(points, 6, seed=1)
    assert sorted(assign.tolist()) == list(range(6))
    assert inertia(points, assign) == 0.0


def test_kmeans_is_seeded(rng):
    points = rng.normal(size=(40, 3))
    assert np.array_equal(kmeans(points, 4, seed=3), kmeans(points, 4, seed=3))
    with pytest.raises(ValueError):
        kmeans(points, 41, seed=0)


def test_kmeans_duplicate_points_fill_every_cluster():
    points = np.zeros((5, 2))
    assign = kmeans(points, 3, seed=0)
    assert sorted(set(assign.tolist())) == [0, 1, 2]


def test_nmi_examples(rng):
    a = [0, 0, 1, 1, 2, 2]
    assert nmi(a, a) == pytest.approx(1.0)
    assert nmi(a, [5, 5, 3, 3, 9, 9]) == pytest.approx(1.0)
    assert nmi([0, 0, 0], [1, 1, 1]) == 1.0
    assert nmi([0, 0, 0], [0, 1, 2]) == 0.0
    independent = nmi(rng.integers(0, 3, 20000), rng.integers(0, 3, 20000))
    assert independent == pytest.approx(0.0, abs=0.01)
    with pytest.raises(ValueError):
        nmi([], [])
    with pytest.raises(ValueError):
        nmi([0, 1], [0])


def test_nmi_matches_brute_force_and_is_symmetric(rng):
    for _ in range(100):
        n = int(rng.integers(1, 21))
        a = rng.integers(0, 4, size=n).tolist()
        b = rng.integers(0, 4, size=n).tolist()
        assert nmi(a, b) == pytest.approx(brute_nmi(a, b), abs=1e-12)
        assert abs(nmi(a, b) - nmi(b, a)) <= 1e-12


def test_evaluate_embeddings_on_planted_structure(rng):
    embeddings, pairs, labels = cluster_embeddings(rng)
    nns, score = evaluate_embeddings(embeddings, pairs, labels, seed=0)
    assert nns[1] == 1.0
    assert set(nns) == {1, 5, 10}
    assert score == pytest.approx(1.0)


# SECTION: export
def test_extract_drops_padding_row(tiny_config, tiny_vocab):
    params = init_params(tiny_config, tiny_vocab.num_codes, seed=0)
    embeddings = extract_code_embeddings(params, tiny_vocab)
    assert embeddings.matrix.shape == (tiny_vocab.num_codes, tiny_config.d)
    assert np.array_equal(embeddings.matrix, params.code_embedding.data[1:])
    assert embeddings.codes == tiny_vocab.codes
    with pytest.raises(ShapeError):
        extract_code_embeddings(init_params(tiny_config, 2, seed=0), tiny_vocab)


def test_export_round_trip(tiny_config, tiny_vocab, tmp_path):
    params = init_params(tiny_config, tiny_vocab.num_codes, seed=0)
    embeddings = extract_code_embeddings(params, tiny_vocab)
    path = write_embeddings(tmp_path / "emb.tsv", embeddings)
    lines = path.read_text().splitlines()
    assert lines[0] == f"code\t{tiny_config.d}"
    back = read_embeddings(path)
    assert list(back.codes) == sorted(embeddings.codes)
    expected = embeddings.subset(back.codes).matrix.astype(np.float64)
    assert np.array_equal(back.matrix, expected)


def test_read_embeddings_errors(tmp_path):
    path = tmp_path / "emb.tsv"
    path.write_text("dx:a\t1,2\n")
    with pytest.raises(IngestionError):
        read_embeddings(path)
    path.write_text("code\t2\ndx:a\t1,2,3\n")
    with pytest.raises(IngestionError):
        read_embeddings(path)
    with pytest.raises(IngestionError):
        read_embeddings(tmp_path / "missing.tsv")
