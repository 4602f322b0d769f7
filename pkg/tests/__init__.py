"""Tests for delayed_ia package."""
