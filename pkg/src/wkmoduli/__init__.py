"""Constant-scalar-curvature Einstein-Dirac geometries in dimension three."""
