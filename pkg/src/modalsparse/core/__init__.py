"""Shared plumbing: atomic files, progress callbacks, the worker pool."""
