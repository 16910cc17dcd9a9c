"""Tests unitaires des transformations sur les jeux de mesures."""

import math

import numpy as np
import pytest

from apps.core.exceptions import DomainError, EmptyDatasetError
from apps.measurements import services
from apps.measurements.enums import SourceTag
from apps.measurements.services import (
    ecdf,
    filter_distance,
    from_amplitudes,
    to_amplitudes,
)
from tests.base import BaseServiceUnitTest
from tests.factories import DatasetFactory


class TestFilterDistance(BaseServiceUnitTest):
    """Vérifie le filtrage sur un intervalle fermé de distances."""

    def get_service_module(self):
        return services

    def test_closed_interval(self, small_dataset):
        kept = filter_distance(small_dataset, 75.0, 125.0)
        assert len(kept) == 1
        assert kept.records[0].distance_m == 100.0

    def test_bounds_are_inclusive(self, small_dataset):
        assert len(filter_distance(small_dataset, 50.0, 150.0)) == 3

    def test_open_upper_bound(self, small_dataset):
        assert len(filter_distance(small_dataset, 100.0)) == 2

    def test_provenance_preserved(self, small_dataset):
        kept = filter_distance(small_dataset, 0.0, 100.0)
        assert kept.reference == small_dataset.reference
        assert kept.source_tag == small_dataset.source_tag

    def test_empty_result(self, small_dataset):
        with pytest.raises(EmptyDatasetError):
            filter_distance(small_dataset, 200.0, 300.0)

    @pytest.mark.parametrize(
        ("lo", "hi"), [(125.0, 75.0), (math.nan, 100.0), (0.0, math.nan)]
    )
    def test_invalid_window(self, small_dataset, lo, hi):
        with pytest.raises(DomainError):
            filter_distance(small_dataset, lo, hi)


class TestAmplitudes(BaseServiceUnitTest):
    """Vérifie la conversion RSS (dB) ↔ amplitudes linéaires."""

    def get_service_module(self):
        return services

    def test_reference_is_db_mean(self):
        ds = DatasetFactory(rss=(-80.0, -100.0, -120.0))
        amps, ref = to_amplitudes(ds)
        assert ref == -100.0
        self.assert_close(amps, [0.1, 1.0, 10.0], rel=1e-12)

    def test_sorted_output(self):
        ds = DatasetFactory(rss=(-80.0, -100.0, -90.0))
        amps, _ = to_amplitudes(ds)
        self.assert_monotone(amps)

    def test_geometric_mean_is_one(self):
        ds = DatasetFactory(
            distances=(100.0,) * 5, rss=(-91.3, -97.0, -88.2, -102.4, -95.5)
        )
        amps, _ = to_amplitudes(ds)
        self.assert_close(np.exp(np.mean(np.log(amps))), 1.0, rel=1e-12)

    def test_empty_dataset(self):
        with pytest.raises(EmptyDatasetError):
            to_amplitudes(DatasetFactory(distances=(), rss=()))

    def test_from_amplitudes_inverse(self):
        ds = DatasetFactory(rss=(-95.25, -96.5, -97.75))
        amps, ref = to_amplitudes(ds)
        back = from_amplitudes(amps, ref)
        self.assert_close(np.sort(back.rss_db), [-97.75, -96.5, -95.25], rel=1e-12)
        assert back.source_tag == SourceTag.SYNTHETIC
        assert set(back.distances_m) == {services.PLACEHOLDER_DISTANCE_M}

    @pytest.mark.parametrize("amps", [[1.0, 0.0], [1.0, -2.0], [math.inf]])
    def test_from_amplitudes_rejects_non_positive(self, amps):
        with pytest.raises(DomainError):
            from_amplitudes(amps, 0.0)

    def test_from_amplitudes_rejects_empty(self):
        with pytest.raises(EmptyDatasetError):
            from_amplitudes([], 0.0)


class TestEcdf(BaseServiceUnitTest):
    def get_service_module(self):
        return services

    def test_unsorted_input(self):
        cdf = ecdf([3.0, 1.0, 2.0, 2.0])
        assert cdf(2.0) == 0.75
        self.assert_monotone(cdf.sorted_values)

    def test_empty(self):
        with pytest.raises(EmptyDatasetError):
            ecdf([])
