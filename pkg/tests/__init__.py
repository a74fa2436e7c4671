"""Tests for homoclinic-covers."""
