"""Ajustement par moindres carrés (Levenberg-Marquardt) des modèles de Rice."""
