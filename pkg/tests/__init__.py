"""Tests package for qratpp."""
