"""Unit test package for trijp."""
