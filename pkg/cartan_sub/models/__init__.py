"""Request and report models."""
