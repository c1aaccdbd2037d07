"""Tests for the gricci library."""
