"""Tests unitaires du moteur Levenberg-Marquardt."""

import math

import numpy as np
import pytest

from apps.core.exceptions import DomainError, NumericalError
from apps.fitting.enums import StopReason
from apps.fitting.lm import LmOptions, forward_jacobian, levenberg_marquardt
from tests.base import BaseUnitTest

T_GRID = np.linspace(0.0, 4.0, 50)
Y_EXP = 2.0 * np.exp(-T_GRID)


def linear_residuals(x):
    a = np.array([[4.0, 1.0], [1.0, 3.0]])
    return a @ x - np.array([11.0, 11.0])


def exponential_residuals(x):
    return x[0] * np.exp(x[1] * T_GRID) - Y_EXP


def rosenbrock_residuals(x):
    return np.array([10.0 * (x[1] - x[0] ** 2), 1.0 - x[0]])


class TestLmOptions(BaseUnitTest):
    """Vérifie la validation des hyperparamètres."""

    def get_target_class(self):
        return LmOptions

    def test_defaults(self):
        opts = LmOptions()
        assert opts.max_iterations == 200
        assert opts.initial_damping == 1e-3

    @pytest.mark.parametrize("value", [0, -3, 2.5])
    def test_invalid_max_iterations(self, value):
        with pytest.raises(DomainError):
            LmOptions(max_iterations=value)

    @pytest.mark.parametrize(
        "name", ["initial_damping", "damping_up", "cost_rel_tol", "fd_rel_step"]
    )
    def test_non_positive_rejected(self, name):
        with pytest.raises(DomainError):
            LmOptions(**{name: 0.0})

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            LmOptions(gradient_inf_tol=math.nan)


class TestForwardJacobian(BaseUnitTest):
    def get_target_class(self):
        return forward_jacobian

    def test_matches_analytic(self):
        x = np.array([1.5, -0.5])
        res = exponential_residuals(x)
        jac = forward_jacobian(exponential_residuals, x, res, 1e-7)
        analytic = np.column_stack(
            (np.exp(x[1] * T_GRID), x[0] * T_GRID * np.exp(x[1] * T_GRID))
        )
        self.assert_close(jac, analytic, rel=1e-5, abs_=1e-6)

    def test_backward_step_outside_domain(self):
        def guarded(x):
            if x[0] > 1.0:
                raise DomainError("x must be <= 1")
            return np.array([x[0] ** 2])

        x = np.array([1.0])
        jac = forward_jacobian(guarded, x, guarded(x), 1e-7)
        self.assert_close(jac, [[2.0]], rel=1e-5)


class TestLevenbergMarquardt(BaseUnitTest):
    """Vérifie la convergence sur des problèmes de référence."""

    def get_target_class(self):
        return levenberg_marquardt

    def test_linear_system(self):
        result = levenberg_marquardt(linear_residuals, [0.0, 0.0])
        assert result.converged
        assert result.iterations <= 3
        self.assert_close(result.x, [2.0, 3.0], rel=0.0, abs_=1e-10)

    def test_cost_stop_on_relative_change(self):
        # 1er pas : variation ~ coût initial ; 2e pas : variation ~1e-6 relative
        result = levenberg_marquardt(
            linear_residuals, [0.0, 0.0], LmOptions(cost_rel_tol=0.5)
        )
        assert result.stop_reason == StopReason.COST_TOLERANCE
        assert result.iterations == 2
        assert len(result.cost_history) == 3

    def test_exponential_decay(self):
        result = levenberg_marquardt(exponential_residuals, [1.0, 0.0])
        assert result.converged
        self.assert_close(result.x, [2.0, -1.0], rel=0.0, abs_=1e-6)

    def test_rosenbrock(self):
        result = levenberg_marquardt(rosenbrock_residuals, [-1.2, 1.0])
        assert result.converged
        self.assert_close(result.x, [1.0, 1.0], rel=0.0, abs_=1e-6)

    def test_cost_history_strictly_decreasing(self):
        result = levenberg_marquardt(rosenbrock_residuals, [-1.2, 1.0])
        assert len(result.cost_history) >= 2
        self.assert_monotone(-np.array(result.cost_history), strict=True)
        assert result.cost == result.cost_history[-1]

    def test_gradient_stop_at_solution(self):
        result = levenberg_marquardt(linear_residuals, [2.0, 3.0])
        assert result.stop_reason == StopReason.GRADIENT_TOLERANCE
        assert result.iterations == 0
        assert result.converged

    def test_iteration_budget(self):
        result = levenberg_marquardt(
            rosenbrock_residuals, [-1.2, 1.0], LmOptions(max_iterations=1)
        )
        assert result.iterations == 1
        assert result.stop_reason == StopReason.MAX_ITERATIONS
        assert not result.converged

    def test_out_of_domain_trials_raise_damping(self):
        def guarded(x):
            if x[0] < 0.5:
                raise DomainError("x must be >= 0.5")
            return np.array([math.sqrt(x[0]) - 1.0])

        result = levenberg_marquardt(guarded, [4.0])
        self.assert_close(result.x, [1.0], rel=0.0, abs_=1e-6)

    def test_non_finite_start(self):
        with pytest.raises(NumericalError):
            levenberg_marquardt(lambda x: np.array([math.inf, 0.0]), [0.0])
