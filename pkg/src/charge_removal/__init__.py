"""Charge-removal reduction workbench: crystal graphs, hardness gadgets and oracles."""
