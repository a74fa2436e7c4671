"""Tests for the command classes."""
