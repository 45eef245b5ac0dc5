"""Algebraic modular forms on GU_2(D) for a definite quaternion algebra D over a real quadratic field."""
__version__ = "0.1.0"
