# secsel: secant-based sensor selection
# The package is split like a small MVC app:
#   models/      data containers and report schemas
#   controllers/ the numerical work
#   routes/      command-line subcommands
#   utils/       file IO and the worker pool

__version__ = "1.0.0"
