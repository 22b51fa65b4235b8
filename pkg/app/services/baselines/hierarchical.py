"""
Hierarchical scalar baselines: the scenario's true parametric families with
latent group variables inferred jointly with the regression.

Covariates stay on their original scale (the families need their native
support); responses are expected standardized.
"""

from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import special

from app.core.errors import DimensionMismatchError, UnknownScenarioError
from app.models.enums import ScaleKind, ScenarioId
from app.services.baselines.common import (
    SIGMA_Y_BLOCKS,
    BaselineModel,
    diffuse_normal,
    sigma_y_log_prior,
    sigma_y_start,
    standardize_regressor,
)
from app.services.gradient_engine import primitives as ad
from app.services.gradient_engine.layout import BlockLayout
from app.services.model_core import distributions as dist
from app.services.model_core.priors import ALPHA_LAMBDA_SCALE
from app.services.model_core.regression import (
    DIFFUSE_SCALE,
    decode_sigma_y,
    regression_log_likelihood,
)

GAUSSIAN = (ScenarioId.GAUSS_LINEAR, ScenarioId.GAUSS_QUADRATIC, ScenarioId.CROON)
LOG_CLIP = 1e-300
MIN_SCALE = 1e-3


class GroupStatistics:
    """Per-group sufficient statistics of the covariate samples."""

    def __init__(self, samples: Sequence[np.ndarray]):
        samples = [np.asarray(x, dtype=float) for x in samples]
        self.n = np.array([x.size for x in samples], dtype=float)
        self.mean = np.array([x.mean() for x in samples])
        self.sum = self.n * self.mean
        self.centered_ss = np.array([np.sum((x - x.mean()) ** 2) for x in samples])
        self.log_x = np.array([np.sum(np.log(np.clip(x, LOG_CLIP, None))) for x in samples])
        self.log_1mx = np.array(
            [np.sum(np.log(np.clip(1.0 - x, LOG_CLIP, None))) for x in samples]
        )
        self.half_dev = np.array([np.mean((x - 0.5) ** 2) for x in samples])
        pooled = np.concatenate(samples)
        self.pooled_mean = float(pooled.mean())
        self.pooled_sd = float(pooled.std(ddof=1)) if pooled.size > 1 else 1.0
        dof = max(pooled.size - len(samples), 1)
        self.within_sd = float(np.sqrt(self.centered_ss.sum() / dof))


class HierarchicalRegression(BaselineModel):
    """
    Latent-variable regression y_i = alpha + beta g(latent_i) + beta_z z_i + e_i.

    Latent families and g per scenario:
      gauss_linear, croon: xi_i ~ N(mu_xi, sigma_xi), X ~ N(xi_i, sigma_x), g = xi
      gauss_quadratic:     as above, g = xi^2
      exp_linear:          lambda_i ~ Gamma(a, a / mu_lambda), X ~ Exp(lambda_i), g = 1/lambda
      beta_linear:         xi_i ~ U(0, 1), X ~ Beta(xi_i, 1 - xi_i), g = xi
      beta_quadratic:      log xi_i ~ N(0, 1), X ~ Beta(xi_i, xi_i), g = 1 + 1/(2 xi_i + 1)
    """

    name = "hierarchical"

    def __init__(
        self,
        scenario: ScenarioId,
        samples: Sequence[np.ndarray],
        y,
        z: Optional[np.ndarray] = None,
    ):
        self.scenario = ScenarioId(scenario)
        self.stats = GroupStatistics(samples)
        self.y = np.asarray(y, dtype=float)
        self.z = None if z is None else np.asarray(z, dtype=float)
        N = self.y.shape[0]
        if self.stats.n.shape[0] != N:
            raise DimensionMismatchError("One covariate sample per response is required")

        if self.scenario in GAUSSIAN:
            latent: List = [
                ("xi_raw", (N,)),
                ("mu_xi", ()),
                ("log_sigma_xi", ()),
                ("log_sigma_x", ()),
            ]
        elif self.scenario == ScenarioId.EXP_LINEAR:
            latent = [("log_lambda", (N,)), ("log_mu_lambda", ()), ("log_alpha_lambda", ())]
        elif self.scenario == ScenarioId.BETA_LINEAR:
            latent = [("logit_xi", (N,))]
        elif self.scenario == ScenarioId.BETA_QUADRATIC:
            latent = [("log_xi", (N,))]
        else:
            raise UnknownScenarioError(f"No hierarchical model for '{scenario}'")

        shapes = latent + [("alpha", ()), ("beta_raw", ())]
        if self.z is not None:
            shapes.append(("beta_z", ()))
        self.layout = BlockLayout(shapes + SIGMA_Y_BLOCKS)

        self.latent_name = "lambda" if self.scenario == ScenarioId.EXP_LINEAR else "xi"
        self.kinds = {
            self.latent_name: ScaleKind.NONE,
            "alpha": ScaleKind.LOCATION_Y,
            "beta": ScaleKind.COEF,
            "sigma_y": ScaleKind.SCALE_Y,
            "mu": ScaleKind.LOCATION_Y,
        }
        if self.scenario in GAUSSIAN:
            self.kinds.update(
                mu_xi=ScaleKind.NONE, sigma_xi=ScaleKind.NONE, sigma_x=ScaleKind.NONE
            )
        if self.z is not None:
            self.kinds["beta_z"] = ScaleKind.COEF

        guess = self._latent_guess()
        self.g_center, self.g_scale = standardize_regressor(self.regressor(guess))

    def _latent_guess(self) -> np.ndarray:
        s = self.stats
        if self.scenario in GAUSSIAN:
            return s.mean
        if self.scenario == ScenarioId.EXP_LINEAR:
            return 1.0 / np.maximum(s.mean, MIN_SCALE)
        if self.scenario == ScenarioId.BETA_LINEAR:
            return np.clip(s.mean, 0.01, 0.99)
        # Beta(xi, xi) has variance 1 / (4 (2 xi + 1))
        return np.maximum((1.0 / (4.0 * np.maximum(s.half_dev, 1e-6)) - 1.0) / 2.0, 0.05)

    def regressor(self, latent):
        """g(latent) for arrays or tape nodes."""
        if self.scenario == ScenarioId.GAUSS_QUADRATIC:
            return ad.square(latent)
        if self.scenario == ScenarioId.EXP_LINEAR:
            return 1.0 / latent
        if self.scenario == ScenarioId.BETA_QUADRATIC:
            return 1.0 + 1.0 / (2.0 * latent + 1.0)
        return latent

    def _latent(self, blocks):
        """(latent values, log prior of the latent block, covariate log-likelihood)."""
        s = self.stats
        if self.scenario in GAUSSIAN:
            sigma_xi = ad.exp(blocks["log_sigma_xi"])
            sigma_x = ad.exp(blocks["log_sigma_x"])
            xi = blocks["mu_xi"] + sigma_xi * blocks["xi_raw"]
            scale = s.pooled_sd
            prior = (
                dist.std_normal(blocks["xi_raw"])
                + dist.normal(blocks["mu_xi"], s.pooled_mean, 5.0 * scale)
                + dist.half_normal(sigma_xi, 2.0 * scale)
                + dist.half_normal(sigma_x, 2.0 * scale)
                + blocks["log_sigma_xi"]
                + blocks["log_sigma_x"]
            )
            squares = s.centered_ss + s.n * ad.square(s.mean - xi)
            loglik = -float(s.n.sum()) * blocks["log_sigma_x"] - 0.5 * ad.sum(squares) / ad.square(
                sigma_x
            )
            return xi, prior, loglik
        if self.scenario == ScenarioId.EXP_LINEAR:
            log_lam = blocks["log_lambda"]
            lam = ad.exp(log_lam)
            shape = ad.exp(blocks["log_alpha_lambda"])
            log_rate = blocks["log_alpha_lambda"] - blocks["log_mu_lambda"]
            prior = (
                dist.gamma_log_scale(log_lam, shape, ad.exp(log_rate), log_rate=log_rate)
                + ad.sum(log_lam)
                + dist.half_normal(ad.exp(blocks["log_mu_lambda"]), 2.0 / s.pooled_mean)
                + dist.half_normal(shape, ALPHA_LAMBDA_SCALE)
                + blocks["log_mu_lambda"]
                + blocks["log_alpha_lambda"]
            )
            loglik = ad.sum(s.n * log_lam) - ad.sum(lam * s.sum)
            return lam, prior, loglik
        if self.scenario == ScenarioId.BETA_LINEAR:
            u = blocks["logit_xi"]
            xi = ad.expit(u)
            rest = ad.expit(-u)
            # uniform xi on (0, 1) seen through the logit
            prior = -ad.sum(ad.softplus(u)) - ad.sum(ad.softplus(-u))
            loglik = ad.sum(
                (xi - 1.0) * s.log_x
                + (rest - 1.0) * s.log_1mx
                - s.n * (ad.gammaln(xi) + ad.gammaln(rest))
            )
            return xi, prior, loglik
        v = blocks["log_xi"]
        xi = ad.exp(v)
        prior = dist.std_normal(v)
        loglik = ad.sum(
            (xi - 1.0) * (s.log_x + s.log_1mx)
            - s.n * (2.0 * ad.gammaln(xi) - ad.gammaln(2.0 * xi))
        )
        return xi, prior, loglik

    def _mean(self, blocks, latent, sigma_y):
        g = (self.regressor(latent) - self.g_center) / self.g_scale
        mu = blocks["alpha"] + DIFFUSE_SCALE * sigma_y * blocks["beta_raw"] * g
        if self.z is not None:
            mu = mu + blocks["beta_z"] * self.z
        return mu

    def _target(self, q):
        blocks = self.layout.split(q)
        sigma_y = decode_sigma_y(blocks)
        latent, latent_prior, covariate_loglik = self._latent(blocks)
        prior = (
            latent_prior
            + diffuse_normal(blocks["alpha"], sigma_y)
            + dist.std_normal(blocks["beta_raw"])
            + sigma_y_log_prior(blocks)
        )
        if self.z is not None:
            prior = prior + diffuse_normal(blocks["beta_z"], sigma_y)
        mu = self._mean(blocks, latent, sigma_y)
        return prior + covariate_loglik + regression_log_likelihood(mu, self.y, sigma_y)

    def initial_blocks(self) -> Dict[str, object]:
        guess = self._latent_guess()
        s = self.stats
        blocks: Dict[str, object] = {"alpha": 0.0, "beta_raw": 0.0, **sigma_y_start()}
        if self.scenario in GAUSSIAN:
            spread = float(np.std(guess, ddof=1)) if guess.size > 1 else s.pooled_sd
            spread = max(spread, MIN_SCALE)
            blocks.update(
                xi_raw=(guess - guess.mean()) / spread,
                mu_xi=float(guess.mean()),
                log_sigma_xi=np.log(spread),
                log_sigma_x=np.log(max(s.within_sd, MIN_SCALE)),
            )
        elif self.scenario == ScenarioId.EXP_LINEAR:
            mean = float(guess.mean())
            var = float(guess.var(ddof=1)) if guess.size > 1 else 0.0
            blocks.update(
                log_lambda=np.log(guess),
                log_mu_lambda=np.log(mean),
                log_alpha_lambda=np.log(mean**2 / var if var > 0 else 1.0),
            )
        elif self.scenario == ScenarioId.BETA_LINEAR:
            blocks["logit_xi"] = special.logit(guess)
        else:
            blocks["log_xi"] = np.log(guess)
        if self.z is not None:
            blocks["beta_z"] = 0.0
        return blocks

    def transform(self, q) -> Dict[str, np.ndarray]:
        """Latent values, beta per unit of g and the matching intercept, sigma_Y and mu."""
        blocks = self.layout.split(np.asarray(q, dtype=float))
        sigma_y = decode_sigma_y(blocks)
        latent, _, _ = self._latent(blocks)
        slope = DIFFUSE_SCALE * sigma_y * float(blocks["beta_raw"])
        beta = slope / self.g_scale
        out: Dict[str, np.ndarray] = {
            self.latent_name: np.asarray(latent, dtype=float),
            "alpha": np.asarray(float(blocks["alpha"]) - beta * self.g_center),
            "beta": np.asarray(beta),
            "sigma_y": np.asarray(sigma_y),
            "mu": np.asarray(self._mean(blocks, latent, sigma_y), dtype=float),
        }
        if self.scenario in GAUSSIAN:
            out["mu_xi"] = np.asarray(blocks["mu_xi"])
            out["sigma_xi"] = np.exp(np.asarray(blocks["log_sigma_xi"]))
            out["sigma_x"] = np.exp(np.asarray(blocks["log_sigma_x"]))
        if self.z is not None:
            out["beta_z"] = np.asarray(blocks["beta_z"])
        return out
