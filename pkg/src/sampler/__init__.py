"""Deterministic and seeded random Latin squares and Latin rectangles."""
