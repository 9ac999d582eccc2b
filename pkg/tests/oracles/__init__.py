"""Independent reference computations used only by tests."""
