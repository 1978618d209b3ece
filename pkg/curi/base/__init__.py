"""Base classes shared by the curi components."""
