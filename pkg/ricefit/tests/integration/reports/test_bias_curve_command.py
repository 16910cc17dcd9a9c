"""Tests d'intégration de la commande ``bias_curve``."""

import numpy as np

from tests.base import BaseCommandIntegrationTest


def read_curve(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# calibration:")
    assert lines[1] == "rss_db,w,ebn0_db"
    return np.array([[float(v) for v in line.split(",")] for line in lines[2:]])


class TestBiasCurveCommand(BaseCommandIntegrationTest):
    """Vérifie la tabulation de w(rss) autour de la sensibilité."""

    def get_command_name(self):
        return "bias_curve"

    def test_calibration_point_with_twenty_byte_packets(self, tmp_path):
        config = self.write_config(tmp_path, {"packet": {"payload_bytes": 20}})
        output = tmp_path / "w.csv"
        self.run_command(config=config, output=output)
        rows = read_curve(output)
        at_s = rows[rows[:, 0] == 0.0]
        assert at_s.shape == (1, 3)
        assert abs(at_s[0, 1] - 0.2) < 1e-6

    def test_default_grid(self, tmp_path):
        output = tmp_path / "w.csv"
        self.run_command(output=output)
        rows = read_curve(output)
        assert rows[0, 0] == -10.0
        assert rows[-1, 0] == 20.0
        assert rows.shape[0] == 61
        assert np.all(np.diff(rows[:, 1]) >= 0)
        assert np.all((rows[:, 1] >= 0) & (rows[:, 1] <= 1))

    def test_custom_grid_absolute(self, tmp_path):
        config = self.write_config(
            tmp_path, {"calibration": {"mode": "absolute", "sensitivity_dbm": -110.0}}
        )
        output = tmp_path / "w.csv"
        self.run_command(
            config=config, rss_min=-112.0, rss_max=-108.0, step=1.0, output=output
        )
        rows = read_curve(output)
        np.testing.assert_allclose(rows[:, 0], [-112.0, -111.0, -110.0, -109.0, -108.0])

    def test_non_positive_step_exit_2(self, tmp_path):
        output = tmp_path / "w.csv"
        self.assert_command_fails(2, step=0.0, output=output)
        assert not output.exists()

    def test_inverted_range_exit_2(self, tmp_path):
        self.assert_command_fails(
            2, rss_min=5.0, rss_max=-5.0, output=tmp_path / "w.csv"
        )
