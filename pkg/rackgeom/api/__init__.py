"""Command-line surface: file parsers and subcommand handlers."""
