class InputError(ValueError):
    """Raised on malformed input: unknown points, bad descriptors, wrong signs."""
