"""Input validation and environment settings for hda-forge."""
