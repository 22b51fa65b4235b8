import enum


class ScenarioId(str, enum.Enum):
    """
    Enum naming the six simulation designs.
    """

    GAUSS_LINEAR = "gauss_linear"
    GAUSS_QUADRATIC = "gauss_quadratic"
    EXP_LINEAR = "exp_linear"
    BETA_LINEAR = "beta_linear"
    BETA_QUADRATIC = "beta_quadratic"
    CROON = "croon"


class BaselineKind(str, enum.Enum):
    """
    Enum representing the scalar comparison models.
    """

    NAIVE_LINEAR = "naive_linear"
    NAIVE_GAM = "naive_gam"
    NAIVE_TRANSFORMED = "naive_transformed"
    HIERARCHICAL = "hierarchical"


class DomainRule(str, enum.Enum):
    """
    Enum representing how the assumed density domain [a', b'] is chosen.
    """

    PAD = "pad"
    ZERO_TO_MAX = "zero_to_max"
    UNIT_INTERVAL = "unit_interval"
    OBSERVED_RANGE = "observed_range"


class ScaleKind(str, enum.Enum):
    """
    Enum describing how a summarized quantity maps back to the original data scale.
    """

    LOCATION_X = "location_x"
    SCALE_X = "scale_x"
    RATE_X = "rate_x"
    DENSITY_X = "density_x"
    LOCATION_Y = "location_y"
    SCALE_Y = "scale_y"
    COEF = "coef"
    SLOPE = "slope"
    CURVATURE = "curvature"
    NONE = "none"
