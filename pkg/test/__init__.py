"""Test package for emodyad."""
