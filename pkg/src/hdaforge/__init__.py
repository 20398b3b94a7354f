"""Core package for the hda-forge toolkit."""

__all__: list[str] = []
