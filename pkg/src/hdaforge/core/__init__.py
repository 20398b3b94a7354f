"""Algorithms and models: ipomsets, complexes, automata, translations and languages."""
