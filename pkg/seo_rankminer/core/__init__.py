"""Configuration, errors, dataset I/O and the site auditing pipeline."""
