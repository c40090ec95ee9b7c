import math

import pytest

import rotinv


def make_cloud(n=64, seed=12345):
    # simple deterministic LCG so the fixture needs no numpy
    state = seed
    points = []
    for _ in range(n):
        coords = []
        for _ in range(3):
            state = (state * 6364136223846793005 + 1442695040888963407) % 2**64
            coords.append(state / 2**64 * 2.0 - 1.0)
        points.append(coords)
    return points


def test_normalize_unit_sphere():
    cloud = rotinv.normalize(make_cloud())
    max_norm = max(math.sqrt(x * x + y * y + z * z) for x, y, z in cloud)
    assert max_norm == pytest.approx(1.0, abs=1e-12)
    centroid = [sum(p[i] for p in cloud) / len(cloud) for i in range(3)]
    assert all(abs(c) < 1e-12 for c in centroid)


def test_farthest_point_sampling_example():
    points = [[0, 0, 0], [1, 0, 0], [0, 0.9, 0], [0.1, 0, 0]]
    assert rotinv.farthest_point_sampling(points, 3) == [0, 1, 2]


def test_ball_query_example():
    points = [[0, 0, 0], [0.3, 0, 0], [0.2, 0.2, 0], [0.9, 0, 0]]
    assert rotinv.ball_query(points, [0], 0.5, 3) == [[0, 2, 1]]


def test_weiszfeld_median_collinear():
    median = rotinv.weiszfeld_median([[0, 0, 0], [1, 0, 0], [5, 0, 0]])
    assert median[0] == pytest.approx(1.0, abs=1e-6)
    assert median[1] == pytest.approx(0.0, abs=1e-9)


def test_approx_median_tracks_weiszfeld():
    blob = [[0.3 + 0.01 * i, -0.2 + 0.005 * i, 0.1] for i in range(24)]
    exact = rotinv.weiszfeld_median(blob)
    approx = rotinv.approx_geometric_median(blob, num_subsets=20, subset_size=8, seed=3)
    err = math.dist(exact, approx)
    assert err < 0.05


def test_descriptor_tensor_rotation_invariance():
    cloud = rotinv.normalize(make_cloud())
    tensor = rotinv.descriptor_tensor(cloud, num_centers=16, radius=0.4, k=6, seed=5)
    assert len(tensor) == 16
    assert len(tensor[0]) == 6
    assert len(tensor[0][0]) == 12

    rotated = rotinv.apply_rotation(cloud, rotinv.random_rotation(9))
    tensor_rot = rotinv.descriptor_tensor(rotated, num_centers=16, radius=0.4, k=6, seed=5)
    worst = max(
        abs(a - b)
        for row, row_r in zip(tensor, tensor_rot)
        for col, col_r in zip(row, row_r)
        for a, b in zip(col, col_r)
    )
    assert worst < 1e-5


def test_codeword_rotation_invariance():
    cloud = rotinv.normalize(make_cloud(n=48, seed=777))
    code = rotinv.codeword(cloud, n1=12, n2=4, k1=3, k2=4, k3=6, channels=8, seed=2)
    assert len(code) == 8

    rotated = rotinv.apply_rotation(cloud, rotinv.random_rotation(4))
    code_rot = rotinv.codeword(rotated, n1=12, n2=4, k1=3, k2=4, k3=6, channels=8, seed=2)
    dot = sum(a * b for a, b in zip(code, code_rot))
    na = math.sqrt(sum(a * a for a in code))
    nb = math.sqrt(sum(b * b for b in code_rot))
    assert dot / (na * nb) > 1 - 1e-6


def test_xyz_round_trip(tmp_path):
    cloud = [[0.5, -1.25, 3.0], [1.0, 2.0, 3.0]]
    path = str(tmp_path / "cloud.xyz")
    rotinv.save_xyz(path, cloud)
    assert rotinv.load_cloud(path, mesh_samples=0, seed=0) == cloud


def test_shape_sampler():
    names = rotinv.shape_class_names()
    assert len(names) >= 5
    sphere = rotinv.sample_shape("sphere", 32, seed=1)
    radii = {round(math.sqrt(x * x + y * y + z * z), 9) for x, y, z in sphere}
    assert len(radii) == 1  # all samples share the sphere radius

    with pytest.raises(Exception):
        rotinv.sample_shape("not-a-shape", 8, seed=0)
