"""Document format and command-line driver."""
