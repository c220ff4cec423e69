"""Numerical modules: acoustics, localization, drift, deployment, planning, simulation."""
