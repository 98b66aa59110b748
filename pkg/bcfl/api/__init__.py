"""REST surface of the simulator."""
