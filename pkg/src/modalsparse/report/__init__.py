"""CSV and SVG artifacts. Writers only; nothing here computes results."""
