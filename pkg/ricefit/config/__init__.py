"""Configuration Django du projet ricefit."""
