"""Tests for the sigdev package."""
