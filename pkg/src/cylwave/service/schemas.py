"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, Field

from .. import experiments, modes, packets


class ParamsModel(BaseModel):
    mass: float = 1.0
    speed: float = 1.0
    hbar: float = 1.0


class PowerExpWeightsModel(BaseModel):
    kind: Literal["power_exp"] = "power_exp"
    amp_a: tuple[float, float] = (1.0, 0.0)
    amp_b: tuple[float, float] = (1.0, 0.0)
    exponent: float = 1.0
    decay: float = 2.0


class TabulatedWeightsModel(BaseModel):
    kind: Literal["tabulated"]
    rows: list[tuple[float, float, float, float, float]]


WeightsModel = Union[PowerExpWeightsModel, TabulatedWeightsModel]


class GridModel(BaseModel):
    lo: float
    hi: float
    n: int


class ConfigModel(BaseModel):
    params: ParamsModel = ParamsModel()
    weights: WeightsModel = Field(default_factory=PowerExpWeightsModel,
                                  discriminator="kind")
    z_grid: GridModel = GridModel(lo=-10.0, hi=10.0, n=201)
    r_grid: GridModel = GridModel(lo=0.0, hi=8.0, n=101)
    nodes: int = 256
    seed: int = 0
    dt: float | None = None
    pad_fraction: float = 0.25

    def to_config(self) -> experiments.RunConfig:
        return experiments.RunConfig(
            params=modes.PhysicalParams(self.params.mass, self.params.speed,
                                        self.params.hbar),
            weights=experiments.weights_from_dict(self.weights.model_dump()),
            z_grid=packets.UniformGrid(self.z_grid.lo, self.z_grid.hi, self.z_grid.n),
            r_grid=packets.UniformGrid(self.r_grid.lo, self.r_grid.hi, self.r_grid.n),
            nodes=self.nodes,
            seed=self.seed,
            dt=self.dt,
            pad_fraction=self.pad_fraction,
        )


class ModeEvalRequest(BaseModel):
    config: ConfigModel = ConfigModel()
    q: float = 0.0
    c1: tuple[float, float] = (0.0, 0.0)
    c2: tuple[float, float] = (1.0, 0.0)
    c3: tuple[float, float] = (1.0, 0.0)
    c4: tuple[float, float] = (0.0, 0.0)
    t: float = 0.0


class PacketFieldRequest(BaseModel):
    config: ConfigModel = ConfigModel()
    t: float = 0.0


class StepSizes(BaseModel):
    dz: float = 1e-3
    dr: float = 1e-3
    dt: float = 1e-3


class ModeArgs(BaseModel):
    q: float = 0.0
    c1: tuple[float, float] = (0.0, 0.0)
    c2: tuple[float, float] = (1.0, 0.0)
    c3: tuple[float, float] = (1.0, 0.0)
    c4: tuple[float, float] = (0.0, 0.0)


class ResidualRequest(BaseModel):
    config: ConfigModel = ConfigModel()
    t: float = 0.0
    h: StepSizes = StepSizes()
    n_probes: int = 32
    target: Literal["packet", "mode"] = "packet"
    mode: ModeArgs | None = None


class NormScanRequest(BaseModel):
    config: ConfigModel = ConfigModel()
    half_lengths: list[float] = [50.0, 100.0, 150.0, 200.0, 300.0, 400.0]
    n_q: int = 1024
    n_z: int = 1024


class PropagateCompareRequest(BaseModel):
    config: ConfigModel = ConfigModel()
    t_final: float = 1.0
    sigma0: float = 1.0
    t_gauss: float = 2.0


class FieldResponse(BaseModel):
    manifest: dict
    columns: list[str]
    rows: list[list[float]]


class ResidualResponse(BaseModel):
    manifest: dict
    max_abs: float
    rms: float
    scale: float
    grid_step: dict


class NormScanResponse(BaseModel):
    manifest: dict
    half_lengths: list[float]
    norms: list[float]
    slope: float
    intercept: float
    r_squared: float


class PropagateCompareResponse(BaseModel):
    manifest: dict
    overlap_dispersionless: float
    gaussian_width_measured: float
    gaussian_width_predicted: float


class HealthResponse(BaseModel):
    status: str
    version: str
