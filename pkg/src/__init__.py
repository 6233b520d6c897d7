"""Source package."""
