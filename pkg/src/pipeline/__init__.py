"""Rainbow Hamilton cycle construction: path forest, flexible sets, linking, absorption."""
