# Copyright 2026 The mvgeo Authors
# SPDX-License-Identifier: Apache-2.0

import math

import numpy as np
import pytest

import mvgeo


@pytest.fixture(scope="module")
def arc():
    scene, cameras = mvgeo.synthesize_scene(3, n_gaussians=1500, count=3, spacing_deg=6.0, size=48)
    renders = [mvgeo.render(scene, cam) for cam in cameras]
    return scene, cameras, renders


def test_render_shapes(arc):
    scene, cameras, renders = arc
    assert len(scene) == 1500
    r = renders[0]
    assert r["color"].shape == (48, 48, 3)
    assert r["color"].dtype == np.float32
    assert r["median_depth"].shape == (48, 48)
    assert r["median_valid"].dtype == np.bool_
    assert r["median_valid"].any()
    assert (r["median_depth"][r["median_valid"]] > 0).all()


def test_view_distance_closed_forms():
    a = mvgeo.Camera(64, 64, 32, 32, 64, 64)
    b = mvgeo.Camera(64, 64, 32, 32, 64, 64, translation=np.array([3.0, 4.0, 0.0]))
    assert mvgeo.view_distance(a, b) == pytest.approx(5.0, abs=1e-12)
    c, s = math.cos(math.pi / 2), math.sin(math.pi / 2)
    rz = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    r = mvgeo.Camera(64, 64, 32, 32, 64, 64, rotation=rz)
    assert mvgeo.view_distance(a, r) == pytest.approx(2.0, abs=1e-12)
    assert mvgeo.view_distance(a, r, norm="spectral") == pytest.approx(math.sqrt(2.0), abs=1e-9)
    with pytest.raises(ValueError):
        mvgeo.view_distance(a, b, norm="l1")


def test_ordering_recovers_arc(arc):
    _, cameras, _ = arc
    shuffled = [cameras[2], cameras[0], cameras[1]]
    d = mvgeo.distance_matrix(shuffled)
    assert d.shape == (3, 3)
    assert np.allclose(d, d.T)
    assert mvgeo.greedy_order(d, 1) == [1, 2, 0]
    assert mvgeo.best_start_order(d) in ([1, 2, 0], [0, 2, 1])


def test_identical_views_give_zero_disparity(arc):
    _, cameras, renders = arc
    r = renders[0]
    out = mvgeo.disparity_and_mask(r["median_depth"], r["median_valid"], r["median_depth"], r["median_valid"],
                                   cameras[0], cameras[0])
    valid = out["disparity_valid"]
    assert out["disparity"].shape == (48, 48, 2)
    assert np.abs(out["disparity"][valid]).max() < 1e-9
    assert (out["mask"] <= r["median_valid"]).all()


def test_cvdp_identity(arc):
    _, cameras, renders = arc
    r = renders[1]
    depth, hit = mvgeo.cvdp(r["median_depth"], r["median_valid"], cameras[1], cameras[1])
    assert (hit == r["median_valid"]).all()
    assert np.array_equal(depth[hit], r["median_depth"][hit])


def test_warp_zero_disparity_is_identity():
    rng = np.random.default_rng(0)
    image = rng.random((8, 9, 3), dtype=np.float32)
    assert np.array_equal(mvgeo.warp(image, np.zeros((8, 9, 2), np.float32)), image)


def test_range_coder_round_trip():
    rng = np.random.default_rng(1)
    symbols = rng.integers(-1000, 1000, size=500).astype(np.int32)
    contexts = rng.integers(0, 2, size=500).astype(np.uint8)
    data = mvgeo.range_encode(symbols, contexts)
    assert isinstance(data, bytes)
    assert np.array_equal(mvgeo.range_decode(data, 500, contexts), symbols)
    with pytest.raises(mvgeo.DecodeError):
        mvgeo.range_decode(data, 499, contexts)


def test_quantize():
    assert mvgeo.quantize(0.37, 0.1) == 4
    assert mvgeo.quantize(-0.05, 0.1) == -1
    assert mvgeo.dequantize(4, 0.1) == pytest.approx(0.4)


def test_sequence_round_trip(arc):
    _, cameras, renders = arc
    q = 1.0 / 32
    images = [r["color"] for r in renders]
    depths = [r["median_depth"] for r in renders]
    valids = [r["median_valid"] for r in renders]
    coded = mvgeo.encode_sequence(images, depths, valids, cameras, q=q)
    assert len(coded) == 3
    decoded = mvgeo.decode_sequence([c["image_stream"] for c in coded], [c["depth_stream"] for c in coded], cameras)
    for c, (image, depth, valid), original in zip(coded, decoded, images):
        assert np.array_equal(image, c["image"])
        assert np.array_equal(depth, c["depth"])
        assert np.array_equal(valid, c["valid"])
        assert np.abs(image - original).max() <= q / 2 + 1e-6
    assert mvgeo.psnr(decoded[0][0], images[0]) == pytest.approx(coded[0]["psnr_image"])


def test_ablation_csv():
    csv, summary = mvgeo.run_ablation(seed=2, n_gaussians=1000, count=3, q_list=[1.0 / 16])
    lines = csv.strip().splitlines()
    assert lines[0] == "arm,view,q,bpp_img,bpp_depth,psnr_img,psnr_depth"
    assert len(lines) == 1 + 6 * 4
    assert "sort" in summary
