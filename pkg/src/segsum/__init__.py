"""Segment-based review summarization with a joint sentiment-topic model."""

__version__ = "0.1.0"
