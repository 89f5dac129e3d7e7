"""Robustly matchable templates, (v, c)-absorbers and T-absorbers."""
