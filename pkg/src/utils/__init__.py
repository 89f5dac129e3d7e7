"""Configuration, seeded random streams and artifact I/O."""
