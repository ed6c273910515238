# Utility functions for grids and dimension lists
