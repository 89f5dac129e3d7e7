"""Absorbing and bridging gadgets, bridges, quasirandomness checks and switchings."""
