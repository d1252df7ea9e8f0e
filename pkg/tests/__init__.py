"""Test package for the Hahn series engine."""
