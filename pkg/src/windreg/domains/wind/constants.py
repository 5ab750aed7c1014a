"""Wind-measurement column schema and calibration targets."""

from __future__ import annotations

from datetime import datetime, timedelta

# ---------------------------------------------------------------------------
# Column schema
# ---------------------------------------------------------------------------

TIMESTAMP_COLUMN = "timestamp"

FEATURE_COLUMNS = (
    "air_temperature_c",
    "barometric_pressure_hpa",
    "wind_direction_deg",
    "wind_speed_ms",
)

TARGET_COLUMN = "wind_power_kw"

DATA_COLUMNS = (*FEATURE_COLUMNS, TARGET_COLUMN)

CSV_HEADER = (TIMESTAMP_COLUMN, *DATA_COLUMNS)

# Axis and table labels
COLUMN_LABELS = {
    "air_temperature_c": "Air Temperature (°C)",
    "barometric_pressure_hpa": "Barometric Pressure (hPa)",
    "wind_direction_deg": "Wind Direction (°)",
    "wind_speed_ms": "Wind Speed (m/s)",
    "wind_power_kw": "Wind Power (kW)",
}

SHORT_LABELS = {
    "air_temperature_c": "Air Temperature",
    "barometric_pressure_hpa": "Barometric Pressure",
    "wind_direction_deg": "Wind Direction",
    "wind_speed_ms": "Wind Speed",
    "wind_power_kw": "Wind Power",
}

# ---------------------------------------------------------------------------
# Physical ranges (checked on every Dataset)
# ---------------------------------------------------------------------------

DIRECTION_MAX_DEG = 360.0     # exclusive
SPEED_MIN_MS = 0.0            # inclusive
PRESSURE_MIN_HPA = 0.0        # exclusive

# ---------------------------------------------------------------------------
# Calibration targets: statistics of the 10-minute reference record
# (mean, sample std, min, max) per column. Mirrored in wind_turbine.v1.yaml.
# ---------------------------------------------------------------------------

REFERENCE_ROWS = 4464

REFERENCE_STATS = {
    "air_temperature_c": (3.9397, 2.0408, -5.29, 10.0),
    "barometric_pressure_hpa": (1019.464, 13.0539, 979.79, 1035.72),
    "wind_direction_deg": (243.1054, 55.1089, 100.67, 359.78),
    "wind_speed_ms": (8.6540, 4.2409, 0.32, 21.07),
    "wind_power_kw": (666.60, 716.68, 2.24, 2033.12),
}

SAMPLING_INTERVAL = timedelta(minutes=10)
SYNTHETIC_START = datetime(2019, 1, 1, 0, 0, 0)

# Profile registered under domains/wind/profiles
PROFILE_NAME = "wind_turbine"
PROFILE_FILE = "wind_turbine.v1.yaml"
