"""Exact transversal, rainbow path and conjecture census engines."""
