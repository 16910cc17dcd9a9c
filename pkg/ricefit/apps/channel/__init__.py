"""Modèle de canal : densité de Rice, fonction de biais, distribution censurée."""
