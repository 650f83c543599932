"""Second-order shape estimates for least-energy levels along Nehari manifold trajectories."""
