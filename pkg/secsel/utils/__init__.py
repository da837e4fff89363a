# Helpers shared by controllers and routes: file IO and the worker pool
