"""Core infrastructure: logging and errors."""
