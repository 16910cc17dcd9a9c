"""Validation du document de configuration JSON (RunConfig)."""

import math

from rest_framework import serializers

from apps.channel.bias import (
    ALPHA_DEFAULT,
    BANDWIDTH_HZ_DEFAULT,
    BETA_DEFAULT,
    BITRATE_HZ_DEFAULT,
    CALIBRATION_PAYLOAD_BYTES,
    CALIBRATION_TARGET_PSR,
    PAYLOAD_BYTES_DEFAULT,
)
from apps.fitting import lm
from apps.measurements.services import PLACEHOLDER_DISTANCE_M

from .enums import CalibrationMode, Scenario

DISTANCE_MIN_M_DEFAULT = 75.0
DISTANCE_MAX_M_DEFAULT = 125.0


class FiniteFloatField(serializers.FloatField):
    """FloatField refusant NaN et ±inf (acceptés par le parseur JSON)."""

    default_error_messages = {"not_finite": "A finite number is required."}

    def to_internal_value(self, data):
        """Convertit puis refuse les valeurs non finies."""
        value = super().to_internal_value(data)
        if not math.isfinite(value):
            self.fail("not_finite")
        return value


class PositiveFloatField(FiniteFloatField):
    """FiniteFloatField strictement positif."""

    default_error_messages = {"not_positive": "Ensure this value is greater than 0."}

    def to_internal_value(self, data):
        """Convertit puis refuse les valeurs <= 0."""
        value = super().to_internal_value(data)
        if value <= 0:
            self.fail("not_positive")
        return value


class LinkBudgetSerializer(serializers.Serializer):
    """Bloc ``link_budget`` (défauts : 200 kHz, 100 kbit/s)."""

    noise_ref_dbm = FiniteFloatField(required=False, allow_null=True, default=None)
    bitrate_hz = PositiveFloatField(default=BITRATE_HZ_DEFAULT)
    bandwidth_hz = PositiveFloatField(default=BANDWIDTH_HZ_DEFAULT)
    alpha = FiniteFloatField(default=ALPHA_DEFAULT, min_value=0.0, max_value=1.0)
    beta = FiniteFloatField(default=BETA_DEFAULT, min_value=0.0, max_value=1.0)


class PacketSerializer(serializers.Serializer):
    """Bloc ``packet`` : taille des paquets mesurés."""

    payload_bytes = serializers.IntegerField(default=PAYLOAD_BYTES_DEFAULT, min_value=1)


class CalibrationSerializer(serializers.Serializer):
    """Bloc ``calibration`` : point (S, target_psr) pour des paquets de 20 octets."""

    mode = serializers.ChoiceField(
        choices=CalibrationMode.choices, default=CalibrationMode.RELATIVE_TO_S
    )
    sensitivity_dbm = FiniteFloatField(required=False, allow_null=True, default=None)
    target_psr = FiniteFloatField(default=CALIBRATION_TARGET_PSR)
    calib_payload_bytes = serializers.IntegerField(
        default=CALIBRATION_PAYLOAD_BYTES, min_value=1
    )

    def validate_target_psr(self, value):
        """Le taux visé doit être dans ]0, 1[."""
        if not 0.0 < value < 1.0:
            raise serializers.ValidationError("target_psr must lie in (0, 1).")
        return value

    def validate(self, data):
        """Sensibilité obligatoire en absolu, nulle par définition en relatif."""
        sensitivity = data.get("sensitivity_dbm")
        if data["mode"] == CalibrationMode.ABSOLUTE:
            if sensitivity is None:
                raise serializers.ValidationError(
                    {"sensitivity_dbm": "required when mode is 'absolute'."}
                )
        else:
            if sensitivity not in (None, 0.0):
                raise serializers.ValidationError(
                    {
                        "sensitivity_dbm": (
                            "must be 0 or absent when mode is 'relative_to_s'."
                        )
                    }
                )
            data["sensitivity_dbm"] = 0.0
        return data


class FitOptionsSerializer(serializers.Serializer):
    """Bloc ``fit`` : hyperparamètres Levenberg-Marquardt."""

    max_iterations = serializers.IntegerField(
        default=lm.MAX_ITERATIONS_DEFAULT, min_value=1
    )
    initial_damping = PositiveFloatField(default=lm.INITIAL_DAMPING_DEFAULT)
    damping_up = PositiveFloatField(default=lm.DAMPING_UP_DEFAULT)
    damping_down = PositiveFloatField(default=lm.DAMPING_DOWN_DEFAULT)
    cost_rel_tol = PositiveFloatField(default=lm.COST_REL_TOL_DEFAULT)
    gradient_inf_tol = PositiveFloatField(default=lm.GRADIENT_INF_TOL_DEFAULT)
    fd_rel_step = PositiveFloatField(default=lm.FD_REL_STEP_DEFAULT)


class DistanceWindowSerializer(serializers.Serializer):
    """Bloc ``distance_window`` ; ``max_m`` null : pas de borne haute."""

    min_m = FiniteFloatField(default=DISTANCE_MIN_M_DEFAULT, min_value=0.0)
    max_m = FiniteFloatField(default=DISTANCE_MAX_M_DEFAULT, allow_null=True)

    def validate(self, data):
        """Fenêtre non vide : min_m <= max_m."""
        if data["max_m"] is not None and data["min_m"] > data["max_m"]:
            raise serializers.ValidationError("min_m must be <= max_m.")
        return data


class TruthSerializer(serializers.Serializer):
    """Bloc ``truth`` de la commande ``simulate``."""

    k_db = FiniteFloatField()
    r_s = PositiveFloatField()
    r_0 = FiniteFloatField(default=0.0)
    amp_ref_dbm = FiniteFloatField(default=0.0)
    unbiased = serializers.BooleanField(default=False)
    distance_m = FiniteFloatField(default=PLACEHOLDER_DISTANCE_M, min_value=0.0)


class RunConfigSerializer(serializers.Serializer):
    """Document de configuration complet ; les blocs absents prennent leurs défauts."""

    DEFAULTED_BLOCKS = (
        "link_budget",
        "packet",
        "calibration",
        "fit",
        "distance_window",
    )

    link_budget = LinkBudgetSerializer()
    packet = PacketSerializer()
    calibration = CalibrationSerializer()
    fit = FitOptionsSerializer()
    distance_window = DistanceWindowSerializer()
    scenario = serializers.ChoiceField(
        choices=Scenario.choices, required=False, allow_null=True, default=None
    )
    truth = TruthSerializer(required=False)

    def to_internal_value(self, data):
        """Remplit les blocs absents avec {} avant validation."""
        if not isinstance(data, dict):
            raise serializers.ValidationError(
                {"non_field_errors": ["Config must be a JSON object."]}
            )
        filled = {name: {} for name in self.DEFAULTED_BLOCKS}
        filled.update(data)
        return super().to_internal_value(filled)
