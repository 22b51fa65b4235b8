import numpy as np
import pytest

from app.core.errors import ConfigurationError, OutOfDomainError
from app.schemas.dataset import DomainSpec, GroupedDataset, GroupRecord, StandardizationInfo
from app.services.pipeline import bin_covariates, bin_indices

UNIT = DomainSpec(a_prime=0.0, b_prime=1.0, a=0.0, b=1.0, K=4)


def test_bins_are_half_open_with_closed_last_bin():
    np.testing.assert_array_equal(
        bin_indices([0.0, 0.25, 0.5, 0.999, 1.0], UNIT), [0, 1, 2, 3, 3]
    )


def test_counts_sum_to_group_sizes():
    dataset = GroupedDataset(
        groups=[GroupRecord(y=0.0, x=[0.1, 0.2, 0.9]), GroupRecord(y=1.0, x=[0.6, 1.0])]
    )
    binned = bin_covariates(dataset, UNIT)
    np.testing.assert_array_equal(binned.counts, [[2, 0, 0, 1], [0, 0, 1, 1]])
    np.testing.assert_array_equal(binned.counts.sum(axis=1), dataset.group_sizes)
    np.testing.assert_allclose(binned.covariate_mass(), [0.4, 0.0, 0.2, 0.4])


def test_endpoint_rounding_is_tolerated():
    dataset = GroupedDataset(
        groups=[GroupRecord(y=0.0, x=[1.0 + 1e-14]), GroupRecord(y=1.0, x=[-1e-14])]
    )
    binned = bin_covariates(dataset, UNIT)
    np.testing.assert_array_equal(binned.counts, [[0, 0, 0, 1], [1, 0, 0, 0]])


def test_out_of_domain_value_names_group_and_original_value():
    dataset = GroupedDataset(groups=[GroupRecord(y=0.0, x=[0.5]), GroupRecord(y=1.0, x=[1.5])])
    with pytest.raises(OutOfDomainError) as excinfo:
        bin_covariates(dataset, UNIT)
    assert excinfo.value.group == 1
    assert excinfo.value.exit_code == 4

    info = StandardizationInfo(y_mean=0.0, y_sd=1.0, x_mean=10.0, x_sd=2.0)
    domain = DomainSpec(a_prime=10.0, b_prime=12.0, a=0.0, b=1.0, K=4)
    with pytest.raises(OutOfDomainError) as excinfo:
        bin_covariates(dataset, domain, info=info)
    assert excinfo.value.value == pytest.approx(13.0)


def test_bin_count_must_match_domain():
    dataset = GroupedDataset(groups=[GroupRecord(y=0.0, x=[0.5]), GroupRecord(y=1.0, x=[0.5])])
    with pytest.raises(ConfigurationError):
        bin_covariates(dataset, UNIT, K=5)
