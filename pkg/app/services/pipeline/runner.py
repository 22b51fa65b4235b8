"""
End-to-end runs: FRODO fits and baseline fits, from a raw dataset to
back-transformed summaries, plot tables and a run manifest.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import structlog

from app.core.config import settings
from app.core.errors import ConfigurationError
from app.schemas.config import FlatFitConfig, InitSettings, ModelConfig, SamplerSettings
from app.schemas.dataset import DomainSpec, GroupedDataset, StandardizationInfo
from app.schemas.results import RunManifest
from app.schemas.scenario import BaselineSpec, GroundTruth, ScenarioSpec
from app.services.baselines import build_baseline
from app.services.diagnostics import functional_bands, secant_slope
from app.services.diagnostics.summary import quantiles
from app.services.init_strategy import (
    chain_starts,
    fit_all,
    init_rng,
    invert_to_noncentered,
    jitter_flat,
    preliminary_latent,
)
from app.services.model_core.posterior import FrodoPosterior
from app.services.model_core.state import BinnedCovariates, ParameterState, Responses
from app.services.pipeline.binning import bin_covariates
from app.services.pipeline.fitting import ModelFit, sample_model
from app.services.pipeline.standardize import standardization_info, standardize
from app.services.simulators import DEFAULTS, default_config_for, true_beta, true_density

logger = structlog.get_logger(__name__)

# spawn key of the posterior-predictive stream; chains use (c,) and inits (c, 1)
PREDICTION_STREAM = (0, 2)


@dataclass
class FrodoRun:
    cfg: ModelConfig
    fit: ModelFit
    binned: BinnedCovariates
    beta_band: pd.DataFrame
    density_bands: Dict[int, pd.DataFrame]
    predictions: pd.DataFrame
    secant_slope: float
    manifest: RunManifest


@dataclass
class BaselineRun:
    spec: BaselineSpec
    fit: ModelFit
    predictions: pd.DataFrame
    manifest: RunManifest
    extras: Dict[str, pd.DataFrame] = field(default_factory=dict)


def resolve_config(
    dataset: GroupedDataset,
    info: StandardizationInfo,
    truth: Optional[GroundTruth] = None,
    overrides: Optional[FlatFitConfig] = None,
) -> ModelConfig:
    """
    Scenario defaults (when the dataset has ground truth) overlaid with a flat config.

    Raises:
        ConfigurationError: no ground truth and the flat config lacks a model key
    """
    overrides = overrides or FlatFitConfig()
    if truth is not None:
        spec = ScenarioSpec(scenario=truth.scenario, n_groups=dataset.n_groups, seed=truth.seed)
        base = default_config_for(spec, dataset, info)
        r, K, domain = base.r, base.K, base.domain
        delta = list(base.delta)
        sampler, init = base.sampler, base.init
    else:
        missing = [
            key
            for key in ("r", "K", "a_prime", "b_prime", "delta")
            if getattr(overrides, key) is None
        ]
        if missing:
            raise ConfigurationError(
                f"Data without ground truth needs these config keys: {', '.join(missing)}"
            )
        r, K, domain, delta = overrides.r, overrides.K, None, []
        sampler, init = SamplerSettings(), InitSettings()

    r = overrides.r if overrides.r is not None else r
    K = overrides.K if overrides.K is not None else K
    if overrides.a_prime is not None or overrides.b_prime is not None or domain.K != K:
        a_prime = overrides.a_prime if overrides.a_prime is not None else domain.a_prime
        b_prime = overrides.b_prime if overrides.b_prime is not None else domain.b_prime
        domain = DomainSpec.from_original(a_prime, b_prime, K, info)
    if overrides.delta is not None:
        if isinstance(overrides.delta, list):
            delta = list(overrides.delta)
        else:
            delta = [float(overrides.delta)] * dataset.n_groups
    if len(delta) != dataset.n_groups:
        raise ConfigurationError(f"delta has {len(delta)} entries for {dataset.n_groups} groups")

    return ModelConfig(
        r=r,
        K=K,
        domain=domain,
        delta=delta,
        has_scalar_covariate=dataset.has_scalar_covariate,
        sampler=SamplerSettings(**{**sampler.model_dump(), **overrides.sampler_overrides()}),
        init=InitSettings(**{**init.model_dump(), **overrides.init_overrides()}),
    )


def initial_state(
    dataset_std: GroupedDataset, binned: BinnedCovariates, cfg: ModelConfig
) -> ParameterState:
    """P-spline Poisson fits of the counts inverted to the non-centered parameterization."""
    theta_hat = fit_all(binned.counts, cfg.r, cfg.init.lambda_init)
    guess = preliminary_latent(dataset_std, cfg)
    return invert_to_noncentered(theta_hat, cfg, guess)


def prediction_table(
    fit: ModelFit, y: np.ndarray, info: StandardizationInfo, seed: int
) -> pd.DataFrame:
    """Per-group posterior mean response and 95% credible and prediction intervals."""
    mu = info.y_mean + info.y_sd * fit.decoded["mu"]
    sigma = info.y_sd * fit.decoded["sigma_y"]
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=PREDICTION_STREAM))
    predicted = mu + sigma[..., None] * rng.standard_normal(mu.shape)
    flat_mu = mu.reshape(-1, mu.shape[-1])
    flat_pred = predicted.reshape(-1, mu.shape[-1])
    mu_lo, mu_hi = quantiles(flat_mu, axis=0)
    pred_lo, pred_hi = quantiles(flat_pred, axis=0)
    return pd.DataFrame(
        {
            "group": np.arange(y.shape[0]),
            "y": y,
            "mu_mean": flat_mu.mean(axis=0),
            "mu_lo": mu_lo,
            "mu_hi": mu_hi,
            "pred_lo": pred_lo,
            "pred_hi": pred_hi,
        }
    )


def beta_band_table(
    fit: ModelFit,
    cfg: ModelConfig,
    binned: BinnedCovariates,
    truth: Optional[GroundTruth] = None,
) -> pd.DataFrame:
    """
    beta band at the original-scale bin midpoints with the covariate mass per bin.

    With ground truth the true beta is centered the same way as the fit,
    against the pooled covariate mass.
    """
    band = functional_bands(fit.info.y_sd * fit.decoded["beta"])
    midpoints = cfg.domain.original_midpoints()
    mass = binned.covariate_mass()
    table = pd.DataFrame(
        {"midpoint": midpoints, "mean": band.mean, "lo": band.lo, "hi": band.hi, "mass": mass}
    )
    if truth is not None:
        beta_star = true_beta(truth, midpoints)
        table["true"] = beta_star - float(mass @ beta_star)
    return table


def band_groups(fit: ModelFit, dataset: GroupedDataset) -> List[int]:
    """Groups with the smallest and largest latent value and the one nearest the average."""
    for name in ("xi", "lambda"):
        if name in fit.decoded:
            latent = fit.decoded[name].reshape(-1, dataset.n_groups).mean(axis=0)
            break
    else:
        latent = np.array([x.mean() for x in dataset.covariates()])
    chosen = [
        int(np.argmin(latent)),
        int(np.argmin(np.abs(latent - latent.mean()))),
        int(np.argmax(latent)),
    ]
    return list(dict.fromkeys(chosen))


def density_band_tables(
    fit: ModelFit,
    cfg: ModelConfig,
    groups: List[int],
    truth: Optional[GroundTruth] = None,
) -> Dict[int, pd.DataFrame]:
    """Density bands on the original scale for the chosen groups."""
    midpoints = cfg.domain.original_midpoints()
    tables = {}
    for group in groups:
        band = functional_bands(fit.decoded["phi"][:, :, group, :] / fit.info.x_sd)
        table = pd.DataFrame(
            {"midpoint": midpoints, "mean": band.mean, "lo": band.lo, "hi": band.hi}
        )
        if truth is not None:
            table["true"] = true_density(truth, group, midpoints)
        tables[group] = table
    return tables


def build_manifest(
    run_kind: str,
    fit: ModelFit,
    config: dict,
    seed: int,
    scenario: Optional[str] = None,
    notes: Optional[dict] = None,
) -> RunManifest:
    return RunManifest(
        run_kind=run_kind,
        scenario=scenario,
        config=config,
        seeds=[seed],
        timings=fit.timings,
        gates=fit.gates,
        standardization=fit.info,
        software_version=settings.VERSION,
        notes={**fit.notes, **(notes or {})},
    )


def fit_frodo(
    dataset: GroupedDataset,
    truth: Optional[GroundTruth] = None,
    overrides: Optional[FlatFitConfig] = None,
    cfg: Optional[ModelConfig] = None,
    workers: Optional[int] = None,
) -> FrodoRun:
    """
    Standardize, bin, initialize, sample and summarize a FRODO fit.

    Args:
        dataset: Raw dataset
        truth: Ground truth of a simulated dataset; supplies default config
            and true curves for the band tables
        overrides: Flat config keys overriding the defaults
        cfg: A complete configuration; takes precedence over defaults and overrides
        workers: Worker processes for the chains

    Returns:
        FrodoRun; gates are evaluated, not enforced
    """
    dataset_std, info = standardize(dataset)
    cfg = cfg or resolve_config(dataset, info, truth, overrides)
    binned = bin_covariates(dataset_std, cfg.domain, cfg.K, info)
    model = FrodoPosterior(cfg, binned, Responses(y=dataset_std.y, z=dataset_std.z))

    base = initial_state(dataset_std, binned, cfg)
    starts = chain_starts(base, cfg, model.value_and_grad)
    workers = settings.CHAIN_WORKERS if workers is None else workers
    fit = sample_model(model, starts, cfg.sampler, info, workers)

    beta_means = fit.decoded["beta"].reshape(-1, cfg.K).mean(axis=0)
    slope = secant_slope(beta_means, cfg.domain, info)
    groups = band_groups(fit, dataset_std)
    scenario = truth.scenario.value if truth is not None else None
    manifest = build_manifest(
        "frodo",
        fit,
        cfg.model_dump(mode="json"),
        cfg.sampler.seed,
        scenario,
        notes={"secant_slope": slope, "init": cfg.init.model_dump(), "band_groups": groups},
    )
    logger.info(
        "FRODO fit finished",
        scenario=scenario,
        sigma_y=fit.summary.get("sigma_y").mean,
        secant_slope=slope,
        gates_passed=fit.gates.passed,
    )
    return FrodoRun(
        cfg=cfg,
        fit=fit,
        binned=binned,
        beta_band=beta_band_table(fit, cfg, binned, truth),
        density_bands=density_band_tables(fit, cfg, groups, truth),
        predictions=prediction_table(fit, dataset.y, info, cfg.sampler.seed),
        secant_slope=slope,
        manifest=manifest,
    )


def baseline_starts(model, sampler: SamplerSettings, max_retries: int = 20) -> List[np.ndarray]:
    q0 = model.initial_point()
    return [
        jitter_flat(q0, model.value_and_grad, init_rng(sampler.seed, chain), max_retries=max_retries)
        for chain in range(sampler.chains)
    ]


def run_baseline(
    dataset: GroupedDataset,
    spec: BaselineSpec,
    sampler: Optional[SamplerSettings] = None,
    workers: Optional[int] = None,
) -> BaselineRun:
    """
    Fit a scalar baseline with the same sampler and gates as FRODO.

    Only Y is standardized; the covariate families need X on its own scale.
    """
    info = standardization_info(dataset, x=False)
    dataset_std, _ = standardize(dataset, info)
    model = build_baseline(spec, dataset_std)
    sampler = sampler or SamplerSettings(target_accept=DEFAULTS[spec.scenario].target_accept)
    starts = baseline_starts(model, sampler)
    workers = settings.CHAIN_WORKERS if workers is None else workers
    fit = sample_model(model, starts, sampler, info, workers)

    extras = {}
    if "curve" in fit.decoded:
        band = functional_bands(info.y_sd * fit.decoded["curve"])
        extras["curve_band"] = pd.DataFrame(
            {"w": model.grid, "mean": band.mean, "lo": band.lo, "hi": band.hi}
        )
    manifest = build_manifest(
        f"baseline:{spec.kind.value}",
        fit,
        {"baseline": spec.model_dump(mode="json"), "sampler": sampler.model_dump()},
        sampler.seed,
        spec.scenario.value,
        notes={"derived_covariate": spec.derived_covariate},
    )
    logger.info(
        "Baseline fit finished",
        kind=spec.kind.value,
        scenario=spec.scenario.value,
        sigma_y=fit.summary.get("sigma_y").mean,
        gates_passed=fit.gates.passed,
    )
    return BaselineRun(
        spec=spec,
        fit=fit,
        predictions=prediction_table(fit, dataset.y, info, sampler.seed),
        manifest=manifest,
        extras=extras,
    )
