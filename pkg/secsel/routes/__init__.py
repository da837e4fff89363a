# This makes the routes directory a Python package
# Each module registers one group of CLI subcommands, the way a router registers endpoints
