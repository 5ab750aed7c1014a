"""Wind measurement dataset: records, CSV I/O, statistics and synthetic data."""
