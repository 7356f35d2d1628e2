import json
import os
import subprocess

import numpy as np
import pytest

import hdrtrain


def test_scalar_encodings():
    assert hdrtrain.encode_pu21(0.005) == 0.0
    assert hdrtrain.encode_pq(10000.0) == pytest.approx(1.0, abs=1e-9)
    assert hdrtrain.encode_mulaw(1.0) == 1.0
    lum = np.logspace(np.log10(0.005), 4, 50)
    np.testing.assert_allclose(hdrtrain.decode_pq(hdrtrain.encode_pq(lum)), lum, rtol=1e-9)


def test_domain_errors_are_value_errors():
    with pytest.raises(ValueError):
        hdrtrain.encode_pu21(0.001)
    with pytest.raises(hdrtrain.DomainError):
        hdrtrain.encode_pq(-1.0)
    with pytest.raises(hdrtrain.ContractError):
        hdrtrain.loss_l1(np.zeros((2, 2, 3), np.float32), np.zeros((2, 3, 3), np.float32))


def test_image_round_trip_and_metrics():
    rng = np.random.default_rng(0)
    img = (rng.random((16, 16, 3)) ** 3).astype(np.float32)
    enc = hdrtrain.encode_image(img, hdrtrain.EncodingKind("pu21"))
    assert enc.shape == img.shape
    dec = hdrtrain.decode_image(enc, hdrtrain.EncodingKind("pu21"))
    np.testing.assert_allclose(dec, np.clip(img, 0.005 / 4000, 1.0), rtol=1e-4)
    assert hdrtrain.pu_psnr(img, img) == 120.0
    assert hdrtrain.pu_ssim(img, img) == 1.0


def test_losses_and_registry():
    labels = [c["label"] for c in hdrtrain.conditions()]
    assert labels == ["Linear-L1", "PQ-L1", "PU21-L1", "mu-L1",
                      "Linear-PQ", "Linear-PU21", "Linear-mu", "Linear-SMAPE"]
    a = np.full((4, 4, 3), 0.25, dtype=np.float32)
    for label in labels:
        assert hdrtrain.condition_loss(label, a, a) == 0.0
    assert hdrtrain.loss_smape(a * 2, a, 1e-9) == pytest.approx(1 / 3, rel=1e-6)


def test_stats():
    t, p, df = hdrtrain.paired_ttest([0.1, -0.1, 0.2, 0.0], [0.0] * 4)
    assert t == pytest.approx(0.7746, abs=1e-3)
    assert p == pytest.approx(0.495, abs=1e-3)
    assert df == 3
    assert hdrtrain.student_t_cdf(0.0, 4) == 0.5


def test_pfm_and_cli(tmp_path):
    img = np.linspace(0.0, 1.0, 4 * 5 * 3, dtype=np.float32).reshape(4, 5, 3)
    src = tmp_path / "a.pfm"
    hdrtrain.write_pfm(img, str(src))
    np.testing.assert_array_equal(hdrtrain.read_pfm(str(src)), img)

    cli = os.environ.get("HDRTRAIN_CLI")
    if not cli:
        pytest.skip("HDRTRAIN_CLI not set")
    out = tmp_path / "b.pfm"
    subprocess.run([cli, "encode", str(src), str(out), "--encoding", "pq"], check=True)
    np.testing.assert_allclose(hdrtrain.read_pfm(str(out)),
                               hdrtrain.encode_image(img, hdrtrain.EncodingKind("pq")), rtol=1e-6)
    listing = subprocess.run([cli, "conditions"], check=True, capture_output=True, text=True)
    assert len(json.loads(listing.stdout)) == 8
    bad = subprocess.run([cli, "encode", str(src), str(out), "--encoding", "gamma"], capture_output=True)
    assert bad.returncode == 2


def test_noise_clamp_switch():
    img = np.full((32, 32, 3), 0.001, dtype=np.float32)
    assert hdrtrain.add_camera_noise(img, seed=4).min() >= 0.0
    raw = hdrtrain.add_camera_noise(img, seed=4, clamp_negative=False)
    assert raw.min() < 0.0
    np.testing.assert_array_equal(hdrtrain.add_camera_noise(img, seed=4), np.maximum(raw, 0.0))
