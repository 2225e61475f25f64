"""Output path template engine."""
