"""Tests for the e8recog package."""
