"""Monte Carlo checks of the fixed-point, diagonal, discrepancy and loop statistics."""
