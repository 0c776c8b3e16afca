"""Experiment orchestration: initial data, sweeps, rate fits and reports."""
