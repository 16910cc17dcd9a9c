"""Préoccupations transverses : exceptions, codes de sortie, logging des runs."""
