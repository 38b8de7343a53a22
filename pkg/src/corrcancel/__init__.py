"""Finite correspondences, divisor intersection and the cancellation operator, computed exactly."""
