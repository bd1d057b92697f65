"""Modified Struve / Bessel numerics and identity verification."""
