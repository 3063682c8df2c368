"""Run configurations shipped with the package, one per reproduced figure."""
