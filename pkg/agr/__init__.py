"""Automaton groups - canonical Mealy-machine elements and Engel-property deciders."""

__version__ = "1.0.0"
