"""Test suite for deskolem."""
