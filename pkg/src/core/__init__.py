"""Core value types: Latin squares, coloured digraphs and position sets."""
