"""Two-deletion-correcting codes."""
