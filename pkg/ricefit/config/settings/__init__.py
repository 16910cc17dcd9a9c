"""Django settings for the ricefit project."""
