"""Jeux de mesures RSS : lecture CSV, filtrage, amplitudes, CDF empirique."""
