"""Matroids over small finite fields."""
