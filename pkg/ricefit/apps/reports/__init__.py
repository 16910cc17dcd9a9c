"""Orchestration CLI : configuration, rapports JSON/CSV et commandes."""
