"""Convolutional mode selector.

The network maps stacked real/imaginary channel planes to one probability
row per transmit antenna over its mode alphabet.  A temperature-annealed
softmax head keeps the rows differentiable early in training and pushes
them toward one-hot selections as the anneal factor grows.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import torch
from torch import nn


@dataclass(frozen=True)
class ModelSpec:
    """Architecture and training defaults for one selector variant."""

    variant: str
    n_tx: int
    n_modes: int
    in_planes: int
    image_height: int
    image_width: int
    conv_filters: tuple
    fc_units: tuple
    activation: str
    dropout: float
    epochs: int
    batch_size: int
    lr: float
    alpha_start: float = 1.0
    alpha_max: float = 20.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        d = dict(d)
        d["conv_filters"] = tuple(d["conv_filters"])
        d["fc_units"] = tuple(d["fc_units"])
        return cls(**d)


_VARIANTS = {
    # single-user: wider/shallower net, ReLU, long schedule, big batches
    "su": dict(
        conv_filters=(64,) * 3 + (128,) * 3,
        fc_units=(512,) * 2,
        activation="relu",
        epochs=200,
        batch_size=1024,
    ),
    # multi-user: deeper narrow net, tanh, short schedule, small batches
    "mu": dict(
        conv_filters=(32,) * 3 + (64,) * 3 + (128,) * 3,
        fc_units=(128,) * 2,
        activation="tanh",
        epochs=50,
        batch_size=64,
    ),
}


def spec_for_variant(variant: str, n_tx: int, n_modes: int, in_planes: int, image_hw) -> ModelSpec:
    if variant not in _VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {sorted(_VARIANTS)}")
    v = _VARIANTS[variant]
    return ModelSpec(
        variant=variant,
        n_tx=n_tx,
        n_modes=n_modes,
        in_planes=in_planes,
        image_height=int(image_hw[0]),
        image_width=int(image_hw[1]),
        conv_filters=v["conv_filters"],
        fc_units=v["fc_units"],
        activation=v["activation"],
        dropout=0.1,
        epochs=v["epochs"],
        batch_size=v["batch_size"],
        lr=1e-4,
    )


def annealed_softmax(scores: torch.Tensor, alpha: float) -> torch.Tensor:
    """Softmax of alpha-scaled scores along the last axis.

    Rows always sum to 1; as alpha grows the output approaches a one-hot
    indicator of the row argmax without changing which entry is largest.
    """
    if alpha <= 0:
        raise ValueError(f"anneal factor must be positive, got {alpha}")
    return torch.softmax(alpha * scores, dim=-1)


_ACTIVATIONS = {"relu": nn.ReLU, "tanh": nn.Tanh}


class ModeSelector(nn.Module):
    """Conv stack + fully connected head emitting per-antenna mode scores."""

    def __init__(self, spec: ModelSpec):
        super().__init__()
        self.spec = spec
        self.alpha = float(spec.alpha_start)
        act = _ACTIVATIONS[spec.activation]
        layers = []
        planes = spec.in_planes
        for f in spec.conv_filters:
            # explicit same-shape padding for the even kernel (pad right/bottom)
            layers.append(nn.ZeroPad2d((0, 1, 0, 1)))
            layers.append(nn.Conv2d(planes, f, kernel_size=2))
            layers.append(act())
            planes = f
        self.conv = nn.Sequential(*layers)
        flat = planes * spec.image_height * spec.image_width
        fc = []
        width = flat
        for u in spec.fc_units:
            fc.append(nn.Linear(width, u))
            fc.append(act())
            fc.append(nn.Dropout(spec.dropout))
            width = u
        self.fc = nn.Sequential(*fc)
        self.head = nn.Linear(width, spec.n_tx * spec.n_modes)
        self._init_weights()

    def _init_weights(self) -> None:
        # variance-preserving init for the chosen activation: the default
        # conv init lets activations decay through the deep tanh stack
        gain = nn.init.calculate_gain(self.spec.activation)
        for m in self.modules():
            if isinstance(m, (nn.Conv2d, nn.Linear)):
                nn.init.xavier_uniform_(m.weight, gain=gain)
                nn.init.zeros_(m.bias)

    def scores(self, images: torch.Tensor) -> torch.Tensor:
        """(B, planes, H, W) -> raw (B, N_T, N_P) selection scores."""
        z = self.conv(images)
        z = self.fc(z.reshape(z.shape[0], -1))
        return self.head(z).reshape(-1, self.spec.n_tx, self.spec.n_modes)

    def forward(self, images: torch.Tensor, alpha: float | None = None) -> torch.Tensor:
        """Per-antenna mode probability rows at the given anneal factor."""
        return annealed_softmax(self.scores(images), self.alpha if alpha is None else alpha)


def hard_weights(probs: torch.Tensor) -> torch.Tensor:
    """Project probability rows to one-hot rows at the row argmax."""
    idx = probs.argmax(dim=-1)
    return torch.nn.functional.one_hot(idx, probs.shape[-1]).to(torch.float64)


def selected_modes(probs: torch.Tensor) -> torch.Tensor:
    """Probability rows -> (B, N_T) 1-based mode digits."""
    return probs.argmax(dim=-1) + 1


def one_hot_targets_from_modes(modes: torch.Tensor, n_modes: int) -> torch.Tensor:
    """(B, N_T) 1-based digits -> (B, N_T, N_P) float32 one-hot targets."""
    return torch.nn.functional.one_hot(modes.long() - 1, n_modes).to(torch.float32)


def save_model(path, model: ModeSelector) -> None:
    torch.save(
        {"spec": model.spec.to_dict(), "alpha": model.alpha, "state": model.state_dict()},
        path,
    )


def load_model(path) -> ModeSelector:
    blob = torch.load(path, map_location="cpu", weights_only=True)
    model = ModeSelector(ModelSpec.from_dict(blob["spec"]))
    model.load_state_dict(blob["state"])
    model.alpha = float(blob["alpha"])
    model.eval()
    return model
