"""Unit test package for pyfreegroups."""
