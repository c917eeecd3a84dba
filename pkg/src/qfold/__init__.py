"""Canonical bases of quantum groups and their mod-p folding."""
