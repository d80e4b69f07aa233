"""Orlicz-type norms, modulars and membership tests for compact operators."""
