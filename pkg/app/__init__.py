"""pregeomzol command-line package."""
