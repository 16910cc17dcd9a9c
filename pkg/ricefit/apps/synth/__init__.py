"""Générateur de mesures synthétiques à vérité terrain connue."""
