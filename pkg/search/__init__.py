# Search module
