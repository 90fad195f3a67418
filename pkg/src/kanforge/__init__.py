"""kanforge: finite-scale lifting, fractions and partial-model-category workbench."""

__version__ = "0.1.0"
