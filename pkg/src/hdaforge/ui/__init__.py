"""Rich-based UI helpers for hda-forge."""
