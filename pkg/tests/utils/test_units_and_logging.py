"""
Utils - unit conversions and logging setup
"""

import logging
import math
from pathlib import Path

import numpy as np
import pytest

from u2u_underlay.utils.logging_config import ROOT_LOGGER_NAME, setup_logging
from u2u_underlay.utils.units import (
    db_to_linear,
    dbm_to_watts,
    linear_to_db,
    per_km2_to_per_m2,
    per_m2_to_per_km2,
    watts_to_dbm,
)


class TestUnits:
    """dB, dBm and density conversions."""

    def test_db_round_trip(self) -> None:
        """Test: Are dB and linear conversions inverse to each other?"""
        values = np.array([-30.0, 0.0, 3.0, 17.5])
        np.testing.assert_allclose(linear_to_db(db_to_linear(values)), values)
        assert db_to_linear(10.0) == pytest.approx(10.0)

    def test_dbm(self) -> None:
        """Test: Is 24 dBm about 251 mW and zero power −inf dBm?"""
        assert dbm_to_watts(24.0) == pytest.approx(0.2512, rel=1e-3)
        assert watts_to_dbm(1.0) == pytest.approx(30.0)
        assert watts_to_dbm(0.0) == -math.inf

    def test_densities(self) -> None:
        """Test: Is 5 per km² equal to 5e-6 per m²?"""
        assert per_km2_to_per_m2(5.0) == pytest.approx(5e-6)
        assert per_m2_to_per_km2(per_km2_to_per_m2(5.0)) == pytest.approx(5.0)


class TestSetupLogging:
    """The package logger."""

    def test_level_and_file(self, tmp_path: Path) -> None:
        """Test: Are the level applied and records written to the log file?"""
        log_file = tmp_path / "logs" / "run.log"
        logger = setup_logging("DEBUG", log_file)
        logging.getLogger(f"{ROOT_LOGGER_NAME}.analytics").debug("file handler message")
        for handler in logger.handlers:
            handler.flush()

        assert logger.level == logging.DEBUG
        assert "file handler message" in log_file.read_text(encoding="utf-8")

    def test_repeated_setup_replaces_handlers(self) -> None:
        """Test: Does a second call avoid duplicate handlers?"""
        setup_logging("INFO")
        logger = setup_logging("WARNING")
        assert len(logger.handlers) == 1
        assert logger.level == logging.WARNING

    def test_environment_level(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test: Is LOG_LEVEL used when no level is passed?"""
        monkeypatch.setenv("LOG_LEVEL", "ERROR")
        assert setup_logging().level == logging.ERROR
