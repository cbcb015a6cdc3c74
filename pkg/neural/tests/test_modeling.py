"""Network architecture, annealed head, and model persistence."""

import numpy as np
import pytest
import torch

from radcnn import (
    ModeSelector,
    annealed_softmax,
    hard_weights,
    load_model,
    one_hot_targets_from_modes,
    save_model,
    selected_modes,
    spec_for_variant,
)


@pytest.fixture()
def mu_spec():
    return spec_for_variant("mu", n_tx=4, n_modes=2, in_planes=4, image_hw=(4, 4))


def test_mu_variant_constants(mu_spec):
    s = mu_spec
    assert s.conv_filters == (32, 32, 32, 64, 64, 64, 128, 128, 128)
    assert s.fc_units == (128, 128)
    assert s.activation == "tanh"
    assert s.dropout == 0.1
    assert s.epochs == 50
    assert s.batch_size == 64
    assert s.lr == 1e-4
    assert s.alpha_start == 1.0
    assert s.alpha_max == 20.0


def test_su_variant_constants():
    s = spec_for_variant("su", n_tx=4, n_modes=2, in_planes=2, image_hw=(2, 4))
    assert s.conv_filters == (64, 64, 64, 128, 128, 128)
    assert s.fc_units == (512, 512)
    assert s.activation == "relu"
    assert s.epochs == 200
    assert s.batch_size == 1024
    assert s.lr == 1e-4


def test_unknown_variant_rejected():
    with pytest.raises(ValueError, match="unknown variant"):
        spec_for_variant("xl", n_tx=4, n_modes=2, in_planes=2, image_hw=(2, 4))


@pytest.mark.parametrize("alpha", [1e-3, 0.5, 1.0, 20.0, 1e4])
def test_annealed_softmax_rows_sum_to_one(alpha):
    torch.manual_seed(0)
    scores = torch.randn(16, 4, 3, dtype=torch.float64)
    probs = annealed_softmax(scores, alpha)
    torch.testing.assert_close(probs.sum(dim=-1), torch.ones(16, 4, dtype=torch.float64))
    assert (probs >= 0).all()


def test_annealed_softmax_sharpens_to_argmax():
    torch.manual_seed(1)
    scores = torch.randn(32, 4, 3, dtype=torch.float64)
    soft = annealed_softmax(scores, 1.0)
    sharp = annealed_softmax(scores, 1e4)
    # same winner at any positive factor, probability mass collapses onto it
    torch.testing.assert_close(soft.argmax(dim=-1), sharp.argmax(dim=-1))
    torch.testing.assert_close(soft.argmax(dim=-1), scores.argmax(dim=-1))
    assert float(sharp.max(dim=-1).values.min()) >= 1.0 - 1e-6


def test_annealed_softmax_rejects_nonpositive_factor():
    scores = torch.zeros(1, 2, 2)
    with pytest.raises(ValueError, match="positive"):
        annealed_softmax(scores, 0.0)
    with pytest.raises(ValueError, match="positive"):
        annealed_softmax(scores, -1.0)


def test_selector_output_shapes(mu_spec):
    torch.manual_seed(0)
    model = ModeSelector(mu_spec)
    images = torch.randn(6, 4, 4, 4)
    scores = model.scores(images)
    assert scores.shape == (6, 4, 2)
    probs = model(images)
    assert probs.shape == (6, 4, 2)
    torch.testing.assert_close(probs.sum(dim=-1), torch.ones(6, 4))


def test_conv_stack_preserves_image_size(mu_spec):
    torch.manual_seed(0)
    model = ModeSelector(mu_spec)
    z = model.conv(torch.randn(2, 4, 4, 4))
    assert z.shape == (2, mu_spec.conv_filters[-1], 4, 4)


def test_dropout_active_only_in_train_mode(mu_spec):
    torch.manual_seed(0)
    model = ModeSelector(mu_spec)
    images = torch.randn(8, 4, 4, 4)
    model.train()
    a = model(images)
    b = model(images)
    assert not torch.equal(a, b)
    model.eval()
    torch.testing.assert_close(model(images), model(images))


def test_hard_weights_and_selected_modes():
    probs = torch.tensor([[[0.7, 0.3], [0.2, 0.8]]])
    w = hard_weights(probs)
    expected = torch.tensor([[[1.0, 0.0], [0.0, 1.0]]], dtype=torch.float64)
    torch.testing.assert_close(w, expected)
    torch.testing.assert_close(selected_modes(probs), torch.tensor([[1, 2]]))


def test_one_hot_targets_from_modes():
    t = one_hot_targets_from_modes(torch.tensor([[2, 1]]), 2)
    expected = torch.tensor([[[0.0, 1.0], [1.0, 0.0]]])
    torch.testing.assert_close(t, expected)
    assert t.dtype == torch.float32


def test_save_load_round_trip(mu_spec, tmp_path):
    torch.manual_seed(3)
    model = ModeSelector(mu_spec)
    model.alpha = 7.5
    path = tmp_path / "model.pt"
    save_model(path, model)
    same = load_model(path)
    assert same.alpha == 7.5
    assert same.spec == mu_spec
    images = torch.randn(4, 4, 4, 4)
    model.eval()
    torch.testing.assert_close(same(images), model(images))


def test_forward_alpha_override_changes_sharpness(mu_spec):
    torch.manual_seed(4)
    model = ModeSelector(mu_spec)
    model.eval()
    images = torch.randn(4, 4, 4, 4)
    with torch.no_grad():
        mild = model(images, alpha=1.0)
        sharp = model(images, alpha=100.0)
    torch.testing.assert_close(mild.argmax(dim=-1), sharp.argmax(dim=-1))
    assert float(sharp.max(dim=-1).values.min()) > float(mild.max(dim=-1).values.min())
