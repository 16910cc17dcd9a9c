# Django apps module
